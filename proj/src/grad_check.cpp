#include <algorithm>
#include <cmath>

#include "stagsrl/autodiff.hpp"

namespace stagsrl {

namespace {

double evaluate(const std::function<Var(Graph&)>& loss_fn) {
  Graph g;
  return loss_fn(g).value().item();
}

}  // namespace

GradCheckReport grad_check(const std::function<Var(Graph&)>& loss_fn,
                           const std::vector<Parameter*>& params, double step, double tolerance) {
  for (Parameter* p : params) p->zero_grad();
  {
    Graph g;
    Var loss = loss_fn(g);
    g.backward(loss);
  }

  GradCheckReport report;
  report.tolerance = tolerance;
  for (Parameter* p : params) {
    GradCheckEntry entry;
    entry.name = p->name();
    entry.elements = p->value().size();
    const Tensor analytic = p->grad();
    for (std::size_t i = 0; i < p->value().size(); ++i) {
      const double saved = p->value()[i];
      p->value()[i] = saved + step;
      const double up = evaluate(loss_fn);
      p->value()[i] = saved - step;
      const double down = evaluate(loss_fn);
      p->value()[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic.empty() ? 0.0 : analytic[i];
      const double rel = std::abs(a - numeric) / std::max(1.0, std::abs(numeric));
      entry.max_rel_error = std::max(entry.max_rel_error, rel);
    }
    report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
    report.entries.push_back(std::move(entry));
  }
  report.passed = report.max_rel_error < tolerance;
  return report;
}

}  // namespace stagsrl
