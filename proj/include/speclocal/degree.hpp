#pragma once
// Degree bookkeeping for the Dirac family: the torus-to-sphere map built
// from its Bloch symbol, its mapping degree (closed form and regular-value
// preimage count), the associated Weyl and Fermi projection families, and
// independent invariant references (plaquette Chern number, determinant
// winding).

#include <cmath>
#include <limits>
#include <functional>
#include <vector>

#include "clifford.hpp"
#include "lattice.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace speclocal {

// Fiber gap of the Dirac symbol closes exactly at these masses.
inline std::vector<double> transition_masses(int d) {
  std::vector<double> ms;
  for (int j = -d; j <= d; j += 2) ms.push_back(double(j));
  return ms;
}

inline void require_nontransition(double m, int d) {
  for (double t : transition_masses(d))
    if (std::abs(m - t) < 1e-12)
      throw MassAtTransition("mass sits on a gap-closing value");
}

// Unnormalized sphere map g(k) = (sin k_1, ..., sin k_d, m - sum_j cos k_j).
inline VecR g_map(int d, double m, const VecR& k) {
  VecR g(d + 1);
  double c = m;
  for (int j = 0; j < d; ++j) {
    g(j) = std::sin(k(j));
    c -= std::cos(k(j));
  }
  g(d) = c;
  return g;
}

inline VecR f_map(int d, double m, const VecR& k) {
  VecR g = g_map(d, m, k);
  double n = g.norm();
  if (n < 1e-14) throw MassAtTransition("sphere map vanishes at this momentum");
  return g / n;
}

struct TorusToSphereMap {
  int d;
  double m;
  VecR operator()(const VecR& k) const { return f_map(d, m, k); }
};

namespace detail {
inline long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
}  // namespace detail

// Degree of f_{d,m} as an alternating partial sum of binomials.
inline long degree_closed_form(int d, double m) {
  require_nontransition(m, d);
  if (std::abs(m) > d) return 0;
  const int l = int(std::floor((d - m) / 2.0));
  long deg = 0;
  for (int k = 0; k <= l; ++k)
    deg += (k % 2 == 0 ? 1 : -1) * detail::binomial(d, k);
  return deg;
}

/* Degree by counting signed preimages of a regular value.  The poles are
   regular whenever m avoids the transition set, and their preimages are
   exactly the momenta with every component in {0, pi}.  Orientation of
   each preimage is the sign of the Jacobian of f in the chart given by
   the first d sphere coordinates; the chart carries opposite orientations
   at the two poles. */
inline long degree_preimage(int d, double m) {
  require_nontransition(m, d);
  const bool south = (m >= 0);  // target pole: -e_{d+1} for m >= 0
  const double chart_sign = south ? 1.0 : -1.0;
  const double h = 1e-5;
  long deg = 0;
  for (long mask = 0; mask < (1L << d); ++mask) {
    VecR k(d);
    for (int j = 0; j < d; ++j) k(j) = (mask >> j & 1) ? M_PI : 0.0;
    const double last = f_map(d, m, k)(d);
    if (south ? (last > 0) : (last < 0)) continue;
    MatR jac(d, d);
    for (int j = 0; j < d; ++j) {
      VecR kp = k, km = k;
      kp(j) += h; km(j) -= h;
      VecR fp = f_map(d, m, kp), fm = f_map(d, m, km);
      for (int i = 0; i < d; ++i) jac(i, j) = (fp(i) - fm(i)) / (2.0 * h);
    }
    const double det = jac.determinant();
    if (std::abs(det) < 1e-10)
      throw Failure("degree_preimage: degenerate preimage Jacobian");
    deg += (chart_sign * det > 0) ? 1 : -1;
  }
  return deg;
}

// ---- projection families over the Brillouin torus -------------------------

// Rank 2^{ceil(d/2)-?}: (1 + sum_j f_j gamma_j) / 2 with the d+1 generator
// representation; rank is half the fiber dimension.
inline Mat weyl_projection(int d, double m, const VecR& k) {
  static thread_local int cached_d = -1;
  static thread_local CliffordRep rep;
  if (cached_d != d) { rep = clifford_jw(d + 1); cached_d = d; }
  VecR f = f_map(d, m, k);
  Mat s = Mat::Zero(rep.dim, rep.dim);
  for (int j = 0; j <= d; ++j) s += f(j) * rep.gamma[j];
  return 0.5 * (Mat::Identity(rep.dim, rep.dim) + s);
}

inline Mat fermi_projection(int d, double m, const VecR& k) {
  return Mat::Identity(weyl_projection(d, m, k).rows(),
                       weyl_projection(d, m, k).rows()) -
         weyl_projection(d, m, k);
}

// Dirac hopping set: on-site m gamma_{d+1}, nearest neighbors
// -(1/2) gamma_{d+1} -+ (i/2) gamma_j along -+e_j, chosen so the Bloch
// fiber is sum_j sin(k_j) gamma_j + (m - sum_j cos k_j) gamma_{d+1}.
// A randomized symbol check pins the sign conventions at construction.
inline TranslationInvariantOperator dirac_bloch_model(int d, double m) {
  CliffordRep rep = clifford_jw(d + 1);
  TranslationInvariantOperator op;
  op.d = d;
  op.L = rep.dim;
  const Mat& gl = rep.gamma[d];  // gamma_{d+1}
  set_hopping(op, std::vector<int>(d, 0), m * gl);
  for (int j = 0; j < d; ++j) {
    std::vector<int> a(d, 0);
    a[j] = 1;
    set_hopping(op, a, -0.5 * gl - cplx(0, 0.5) * rep.gamma[j]);
    a[j] = -1;
    set_hopping(op, a, -0.5 * gl + cplx(0, 0.5) * rep.gamma[j]);
  }
  validate_hoppings(op);
  CounterRng rng(0x5d1acULL);
  for (int trial = 0; trial < 100; ++trial) {
    VecR k(d);
    for (int j = 0; j < d; ++j)
      k(j) = 2.0 * M_PI * rng.uniform01(100ULL * trial + j);
    Mat sym = Mat::Zero(rep.dim, rep.dim);
    double c = m;
    for (int j = 0; j < d; ++j) {
      sym += std::sin(k(j)) * rep.gamma[j];
      c -= std::cos(k(j));
    }
    sym += c * gl;
    if ((bloch_fiber(op, k) - sym).cwiseAbs().maxCoeff() > 1e-12)
      throw Failure("dirac_bloch_model: symbol mismatch");
  }
  return op;
}

// ---- independent invariant references -------------------------------------

namespace detail {
// Orthonormal frame of the near-1 eigenspace of a projection-like matrix.
inline Mat projection_frame(const Mat& p) {
  Eigen::SelfAdjointEigenSolver<Mat> es(p);
  const VecR& ev = es.eigenvalues();
  long rank = 0;
  for (long i = 0; i < ev.size(); ++i) {
    if (ev(i) > 0.25 && ev(i) < 0.75)
      throw GapClosed("chern_fhs: projection eigenvalue far from {0,1}");
    if (ev(i) > 0.5) ++rank;
  }
  return es.eigenvectors().rightCols(rank);
}
}  // namespace detail

/* Chern number of a smooth projection family over the 2-torus by the
   plaquette field-strength method: link variables are determinants of
   frame overlaps, the lattice curvature is the argument of the plaquette
   product, and the total flux is 2 pi times an integer once every
   plaquette argument is small.  The grid doubles until two admissible
   resolutions agree. */
inline long chern_fhs(const std::function<Mat(double, double)>& proj,
                      int n0 = 24) {
  const int cap = 1536;
  bool have_prev = false;
  long prev = 0;
  for (int n = n0; n <= cap; n *= 2) {
    std::vector<Mat> frame(std::size_t(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        frame[std::size_t(i) * n + j] = detail::projection_frame(
            proj(2.0 * M_PI * i / n, 2.0 * M_PI * j / n));
    auto link = [&](int i1, int j1, int i2, int j2) {
      return cplx(
          (frame[std::size_t(i1 % n) * n + (j1 % n)].adjoint() *
           frame[std::size_t(i2 % n) * n + (j2 % n)])
              .determinant());
    };
    double total = 0;
    bool admissible = true;
    for (int i = 0; i < n && admissible; ++i)
      for (int j = 0; j < n && admissible; ++j) {
        cplx u = link(i, j, i + 1, j) * link(i + 1, j, i + 1, j + 1) *
                 std::conj(link(i, j + 1, i + 1, j + 1)) *
                 std::conj(link(i, j, i, j + 1));
        if (std::abs(u) < 1e-12) { admissible = false; break; }
        double f = std::arg(u);
        if (std::abs(f) >= M_PI / 2) { admissible = false; break; }
        total += f;
      }
    if (!admissible) { have_prev = false; continue; }
    const double ch = total / (2.0 * M_PI);
    const long rounded = std::lround(ch);
    if (std::abs(ch - rounded) > 1e-6)
      throw Failure("chern_fhs: flux sum not an integer");
    if (have_prev && rounded == prev) return rounded;
    have_prev = true;
    prev = rounded;
  }
  throw GridTooCoarse("chern_fhs: no stable admissible grid below cap");
}

/* Winding number of det A(k) around the origin for k over [0, 2pi).
   Phases are accumulated stepwise; any step of at least pi/2 forces a
   finer grid so no crossing can be stepped over. */
inline long winding_det(const std::function<Mat(double)>& a, int n0 = 64) {
  const int cap = 1 << 20;
  for (int n = n0; n <= cap; n *= 2) {
    std::vector<cplx> dets(n);
    double dmax = 0, dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      dets[i] = cplx(a(2.0 * M_PI * i / n).determinant());
      dmax = std::max(dmax, std::abs(dets[i]));
      dmin = std::min(dmin, std::abs(dets[i]));
    }
    if (dmin < 1e-10 * dmax)
      throw DetVanishes("winding_det: determinant reaches zero");
    double total = 0;
    bool fine = true;
    for (int i = 0; i < n; ++i) {
      double step = std::arg(dets[(i + 1) % n] / dets[i]);
      if (std::abs(step) >= M_PI / 2) { fine = false; break; }
      total += step;
    }
    if (!fine) continue;
    const double w = total / (2.0 * M_PI);
    const long rounded = std::lround(w);
    if (std::abs(w - rounded) > 1e-6)
      throw Failure("winding_det: phase sum not an integer");
    return rounded;
  }
  throw GridTooCoarse("winding_det: no fine enough grid below cap");
}

}  // namespace speclocal
