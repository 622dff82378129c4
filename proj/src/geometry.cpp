#include "hik/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace hik {

namespace detail {

void check_signature_or_throw(const Mat4<double>& g) {
  const Inertia in = inertia(g);
  if (in.positive != 1 || in.negative != 3) {
    std::ostringstream os;
    os << "signature error: expected (1,3), found (" << in.positive << "," << in.negative << ")";
    if (in.zero) os << " with " << in.zero << " null direction(s)";
    throw TetradError(os.str(), -1);
  }
}

Tetrad<double> eigen_tetrad(const Mat4<double>& g) {
  const SymmetricEigen eig = symmetric_eigen(g);  // ascending: three negative, then one positive
  Mat4<double> coframe = zero_mat<double>();
  for (int m = 0; m < 4; ++m) coframe[0][m] = std::sqrt(eig.values[3]) * eig.vectors[m][3];
  for (int a = 1; a < 4; ++a)
    for (int m = 0; m < 4; ++m) coframe[a][m] = std::sqrt(-eig.values[a - 1]) * eig.vectors[m][a - 1];
  try {
    return Tetrad<double>::from_coframe(coframe, TetradMode::eigen);
  } catch (const SingularMatrixError&) {
    throw TetradError("singular tetrad", -1);
  }
}

}  // namespace detail

void check_signature(const Mat4<double>& g) {
  try {
    detail::check_signature_or_throw(g);
  } catch (const TetradError& e) {
    throw ContextError(e.what());
  }
}

Tensor4<double> riemann_from(const Tensor3<double>& gamma, const Tensor4<double>& dgamma) {
  Tensor4<double> r{};
  for (int rho = 0; rho < 4; ++rho)
    for (int sig = 0; sig < 4; ++sig)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          double v = dgamma[mu][rho][nu][sig] - dgamma[nu][rho][mu][sig];
          for (int lam = 0; lam < 4; ++lam)
            v += gamma[rho][mu][lam] * gamma[lam][nu][sig] - gamma[rho][nu][lam] * gamma[lam][mu][sig];
          r[rho][sig][mu][nu] = v;
        }
  return r;
}

GeometryAtPoint geometry_at(const MetricSpec& spec, const Point<double>& x) {
  if (!spec.in_domain(x)) {
    std::ostringstream os;
    os << "point (" << x[0] << ", " << x[1] << ", " << x[2] << ", " << x[3] << ") is outside the domain of "
       << spec.name();
    throw GeometryError(os.str());
  }
  GeometryAtPoint out;
  out.x = x;
  for (int k = 0; k < 4; ++k) {
    const LocalGeometry<Dual<double>> geo = local_geometry(spec, seed(x, k));
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        if (k == 0) {
          out.g[a][b] = geo.g[a][b].v;
          out.ginv[a][b] = geo.ginv[a][b].v;
          for (int l = 0; l < 4; ++l) out.dg[l][a][b] = geo.dg[l][a][b].v;
        }
        for (int l = 0; l < 4; ++l) {
          if (k == 0) out.gamma[l][a][b] = geo.gamma[l][a][b].v;
          out.dgamma[k][l][a][b] = geo.gamma[l][a][b].d;
        }
      }
  }
  out.riemann_up = riemann_from(out.gamma, out.dgamma);
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s)
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          double v = 0.0;
          for (int l = 0; l < 4; ++l) v += out.g[r][l] * out.riemann_up[l][s][m][n];
          out.riemann[r][s][m][n] = v;
        }
  return out;
}

MultivectorD curvature_bivector(const GeometryAtPoint& geo, int mu, int nu) {
  MultivectorD c;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) c.at((1 << a) | (1 << b)) = geo.riemann[a][b][mu][nu];
  return c;
}

}  // namespace hik
