#pragma once

#include <string>

#include "stagsrl/conll_io.hpp"
#include "stagsrl/treebank.hpp"

namespace fixtures {

// "No, it wasn't black Monday." with heads and relations read off its supertags.
// The final period's relation is not shown with the tags; P is inferred.
inline const std::string kReference =
    "1\tNo\tno\tno\tUH\tUH\t_\t_\t4\t4\tDEP\tDEP\t_\t_\tAM-DIS\n"
    "2\t,\t,\t,\t,\t,\t_\t_\t4\t4\tP\tP\t_\t_\t_\n"
    "3\tit\tit\tit\tPRP\tPRP\t_\t_\t4\t4\tSBJ\tSBJ\t_\t_\tA1\n"
    "4\twas\tbe\tbe\tVBD\tVBD\t_\t_\t0\t0\tROOT\tROOT\tY\tbe.01\t_\n"
    "5\tn't\tnot\tnot\tRB\tRB\t_\t_\t4\t4\tADV\tADV\t_\t_\tAM-NEG\n"
    "6\tblack\tblack\tblack\tJJ\tJJ\t_\t_\t7\t7\tNAME\tNAME\t_\t_\t_\n"
    "7\tMonday\tmonday\tmonday\tNNP\tNNP\t_\t_\t4\t4\tPRD\tPRD\t_\t_\tA2\n"
    "8\t.\t.\t.\t.\t.\t_\t_\t4\t4\tP\tP\t_\t_\t_\n"
    "\n";

// the -> dog (NMOD), dog -> barks (SBJ), barks -> root.
inline const std::string kThreeTokens =
    "1\tthe\tthe\tthe\tDT\tDT\t_\t_\t2\t_\tNMOD\t_\t_\t_\t_\n"
    "2\tdog\tdog\tdog\tNN\tNN\t_\t_\t3\t_\tSBJ\t_\t_\t_\tA0\n"
    "3\tbarks\tbark\tbark\tVBZ\tVBZ\t_\t_\t0\t_\tROOT\t_\tY\tbark.01\t_\n"
    "\n";

inline stagsrl::ConllSentence parse_one(const std::string& text) {
  return stagsrl::parse_conll2009(text).at(0);
}

inline stagsrl::DepTree tree_of(const std::string& text) {
  return stagsrl::tree_from_sentence(parse_one(text));
}

}  // namespace fixtures
