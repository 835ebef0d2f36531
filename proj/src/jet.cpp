#include "cgconf/jet.hpp"

namespace cgconf {

JetResult jet_derivatives(const std::function<std::vector<Jet>(const std::vector<Jet>&)>& f,
                          const Vec& x) {
  const int n = static_cast<int>(x.size());
  if (n > kMaxJetVars) throw InvalidParamsError("too many jet variables");
  std::vector<Jet> seeds;
  seeds.reserve(n);
  for (int i = 0; i < n; ++i) seeds.push_back(Jet::variable(x(i), i, n));
  const std::vector<Jet> out = f(seeds);

  const int m = static_cast<int>(out.size());
  JetResult r;
  r.value.resize(m);
  r.jacobian.resize(m, n);
  r.hessian.comps.reserve(m);
  for (int a = 0; a < m; ++a) {
    r.value(a) = out[a].value();
    r.jacobian.row(a) = out[a].grad().transpose();
    r.hessian.comps.emplace_back(out[a].hess());
  }
  return r;
}

}  // namespace cgconf
