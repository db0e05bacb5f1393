#include "nbmc/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nbmc {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options) {
  const int n = static_cast<int>(x0.size());
  if (n < 1) {
    throw std::invalid_argument("nelder_mead: empty start point");
  }
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  NelderMeadResult res;

  std::vector<Eigen::VectorXd> verts(n + 1, x0);
  Eigen::VectorXd fv(n + 1);
  for (int j = 0; j < n; ++j) {
    verts[j + 1][j] += options.init_step;
  }
  for (int j = 0; j <= n; ++j) {
    fv[j] = f(verts[j]);
  }
  res.n_evals = n + 1;

  std::vector<int> order(n + 1);
  const auto sort_order = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
  };

  for (res.n_iters = 0; res.n_iters < options.max_iters; ++res.n_iters) {
    sort_order();
    const int best = order[0], worst = order[n], second = order[n - 1];
    res.trace.push_back(fv[best]);

    const double fspread = fv[worst] - fv[best];
    double xdist = 0.0;
    for (int j = 0; j <= n; ++j) {
      xdist = std::max(xdist, (verts[j] - verts[best]).lpNorm<Eigen::Infinity>());
    }
    if (fspread <= options.f_tol || xdist <= options.x_tol) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int j = 0; j <= n; ++j) {
      if (j != worst) centroid += verts[j];
    }
    centroid /= n;

    const Eigen::VectorXd xr = centroid + kReflect * (centroid - verts[worst]);
    const double fr = f(xr);
    ++res.n_evals;

    if (fr < fv[best]) {
      const Eigen::VectorXd xe = centroid + kExpand * (xr - centroid);
      const double fe = f(xe);
      ++res.n_evals;
      if (fe < fr) {
        verts[worst] = xe;
        fv[worst] = fe;
      } else {
        verts[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      verts[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    // Contract toward the better of the worst vertex and its reflection.
    const bool outside = fr < fv[worst];
    Eigen::VectorXd xc;
    if (outside) {
      xc = centroid + kContract * (xr - centroid);
    } else {
      xc = centroid - kContract * (centroid - verts[worst]);
    }
    const double fc = f(xc);
    ++res.n_evals;
    if (fc < std::min(fr, fv[worst])) {
      verts[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (int j = 0; j <= n; ++j) {
      if (j == best) continue;
      verts[j] = verts[best] + kShrink * (verts[j] - verts[best]);
      fv[j] = f(verts[j]);
      ++res.n_evals;
    }
  }

  sort_order();
  res.x = verts[order[0]];
  res.f = fv[order[0]];
  if (!res.trace.empty() && res.trace.back() > res.f) {
    res.trace.push_back(res.f);
  }
  return res;
}

}  // namespace nbmc
