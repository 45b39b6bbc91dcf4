#include "karoubi/decompose.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace karoubi::decompose {

using quant::Channel;
using quant::CompositeSystem;

namespace {

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Complex hs_inner(const CMat& a, const CMat& b) { return (a.adjoint() * b).trace(); }

// Real coordinates of a Hermitian d x d matrix, isometric for the HS inner
// product: diagonal entries, then sqrt(2) * (re, im) of the upper triangle.
RVec herm_to_real(const CMat& h) {
  const int d = int(h.rows());
  RVec v(d * d);
  int t = 0;
  for (int i = 0; i < d; ++i) v(t++) = h(i, i).real();
  const double s = std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      v(t++) = s * h(i, j).real();
      v(t++) = s * h(i, j).imag();
    }
  return v;
}

CMat real_to_herm(const RVec& v, int d) {
  CMat h = CMat::Zero(d, d);
  int t = 0;
  for (int i = 0; i < d; ++i) h(i, i) = v(t++);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double re = v(t++), im = v(t++);
      h(i, j) = Complex(re * s, im * s);
      h(j, i) = Complex(re * s, -im * s);
    }
  return h;
}

// Orthonormal basis of the real span of the columns of `cand`, by SVD.
RMat real_span_basis(const RMat& cand, double rel_tol = 1e-9) {
  if (cand.cols() == 0) return RMat(cand.rows(), 0);
  Eigen::JacobiSVD<RMat> svd(cand, Eigen::ComputeThinU);
  const RVec sv = svd.singularValues();
  const double cut = rel_tol * std::max(sv.size() ? sv(0) : 0.0, 1.0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

// Hermitian orthonormal basis spanning (over C) the dagger-closed complex
// span of `mats`. Returns exactly `expected` elements or fails.
std::vector<CMat> hermitian_basis(const std::vector<CMat>& mats, int expected) {
  if (mats.empty()) {
    if (expected != 0) fail("NumericalFailure", "empty candidate set for Hermitian basis");
    return {};
  }
  const int d = int(mats[0].rows());
  RMat cand(d * d, 2 * mats.size());
  for (size_t i = 0; i < mats.size(); ++i) {
    const CMat h = 0.5 * (mats[i] + mats[i].adjoint());
    const CMat k = Complex(0, -0.5) * (mats[i] - mats[i].adjoint());
    cand.col(2 * i) = herm_to_real(h);
    cand.col(2 * i + 1) = herm_to_real(k);
  }
  const RMat basis = real_span_basis(cand);
  if (basis.cols() != expected)
    fail("NumericalFailure", "Hermitian closure has unexpected dimension");
  std::vector<CMat> out;
  out.reserve(expected);
  for (int i = 0; i < basis.cols(); ++i) out.push_back(real_to_herm(basis.col(i), d));
  return out;
}

// ---------------------------------------------------------------------------
// The fixed-point C*-algebra S = Fix(p^dag) with the modified product
// x * y := p^dag(x y), handled in coefficient space over a Hermitian
// orthonormal basis. Hermitian elements are exactly the real coefficient
// vectors.
struct StarAlgebra {
  Channel phi;               // p^dag
  std::vector<CMat> basis;   // Hermitian, HS-orthonormal
  int d = 0;                 // ambient B(C^d)
  int m = 0;                 // dim S
  std::vector<CMat> lmul;    // lmul[a](c, b) = coeff_c(B_a * B_b)

  CVec coeffs(const CMat& x) const {
    CVec c(m);
    for (int a = 0; a < m; ++a) c(a) = (basis[a] * x).trace();
    return c;
  }

  CMat from_coeffs(const CVec& c) const {
    CMat x = CMat::Zero(d, d);
    for (int a = 0; a < m; ++a) x += c(a) * basis[a];
    return x;
  }

  CMat star(const CMat& x, const CMat& y) const { return phi.apply(x * y); }

  // Left and right *-multiplication by the element with coefficients c.
  CMat left_mult(const CVec& c) const {
    CMat l = CMat::Zero(m, m);
    for (int a = 0; a < m; ++a) l += c(a) * lmul[a];
    return l;
  }

  CMat right_mult(const CVec& c) const {
    CMat r(m, m);
    for (int b = 0; b < m; ++b) r.col(b) = lmul[b] * c;
    return r;
  }
};

StarAlgebra build_star_algebra(const Channel& p, Tolerance tol) {
  StarAlgebra s;
  s.phi = p.adjoint();
  s.basis = fixed_point_space(s.phi, tol);
  s.d = p.dom().total_dim();
  s.m = int(s.basis.size());
  // Sanity: the unit I must lie in S.
  const CMat id = CMat::Identity(s.d, s.d);
  if (max_abs(s.from_coeffs(s.coeffs(id)) - id) > 1e-6)
    fail("NumericalFailure", "identity is not recovered in the fixed algebra");
  s.lmul.reserve(s.m);
  for (int a = 0; a < s.m; ++a) {
    CMat l(s.m, s.m);
    for (int b = 0; b < s.m; ++b) l.col(b) = s.coeffs(s.star(s.basis[a], s.basis[b]));
    s.lmul.push_back(std::move(l));
  }
  return s;
}

// Real orthonormal coefficient basis of the centre of S.
RMat center_basis(const StarAlgebra& s) {
  CMat acc = CMat::Zero(s.m, s.m);
  for (int a = 0; a < s.m; ++a) {
    CVec ea = CVec::Zero(s.m);
    ea(a) = 1.0;
    const CMat c = s.lmul[a] - s.right_mult(ea);
    acc += c.adjoint() * c;
  }
  Eigen::SelfAdjointEigenSolver<CMat> eig(acc);
  const RVec ev = eig.eigenvalues();  // ascending
  const double cut = 1e-9 * std::max(ev(ev.size() - 1), 1.0);
  int k = 0;
  while (k < ev.size() && ev(k) <= cut) ++k;
  if (k == 0) fail("NumericalFailure", "the centre lost its unit");
  // Real-ify: the centre is dagger-closed, so real coefficient vectors span it.
  RMat cand(s.m, 2 * k);
  for (int i = 0; i < k; ++i) {
    cand.col(2 * i) = eig.eigenvectors().col(i).real();
    cand.col(2 * i + 1) = eig.eigenvectors().col(i).imag();
  }
  RMat basis = real_span_basis(cand);
  if (basis.cols() != k) fail("NumericalFailure", "centre is not dagger-closed numerically");
  return basis;
}

// Normalises v (known to be proportional to a *-idempotent) so that
// z * z = z. Returns false when v is numerically degenerate.
bool normalize_star_idempotent(const StarAlgebra& s, CMat& v, double check_tol) {
  const CMat vv = s.star(v, v);
  const Complex num = hs_inner(v, vv), den = hs_inner(v, v);
  if (std::abs(den) < 1e-14 || std::abs(num) < 1e-12 * std::abs(den)) return false;
  const Complex scale = num / den;
  v /= scale;
  const CMat res = s.star(v, v) - v;
  const CMat herm = v - v.adjoint();
  return max_abs(res) <= check_tol && max_abs(herm) <= check_tol;
}

// Distinct-cluster eigen split of a commutative piece: eigenvectors of the
// left-*-multiplication by h restricted to a commutative subalgebra give its
// minimal idempotents after normalisation.
std::optional<std::vector<CMat>> split_commutative(const StarAlgebra& s, const RMat& sub_basis,
                                                   const CVec& h_coeffs, double check_tol) {
  const int k = int(sub_basis.cols());
  const CMat lh = s.left_mult(h_coeffs);
  CMat lh_sub(k, k);
  for (int t = 0; t < k; ++t) {
    const CVec w = lh * sub_basis.col(t).cast<Complex>();
    lh_sub.col(t) = sub_basis.transpose().cast<Complex>() * w;
  }
  Eigen::ComplexEigenSolver<CMat> eig(lh_sub);
  // The eigenvalues must form k well-separated (near-real) points.
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (std::abs(eig.eigenvalues()(i) - eig.eigenvalues()(j)) < 1e-5) return std::nullopt;
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return eig.eigenvalues()(a).real() < eig.eigenvalues()(b).real();
  });
  std::vector<CMat> out;
  for (int idx : order) {
    const CVec coeff = sub_basis.cast<Complex>() * eig.eigenvectors().col(idx);
    CMat v = s.from_coeffs(coeff);
    if (!normalize_star_idempotent(s, v, check_tol)) return std::nullopt;
    out.push_back(std::move(v));
  }
  return out;
}

// Real orthonormal coefficient basis of the corner z * S * z.
RMat corner_basis(const StarAlgebra& s, const CMat& z) {
  const CVec zc = s.coeffs(z);
  const CMat proj = s.left_mult(zc) * s.right_mult(zc);
  // Column space of proj, then real-ified (the corner is dagger-closed).
  Eigen::JacobiSVD<CMat> svd(proj, Eigen::ComputeThinU);
  const RVec sv = svd.singularValues();
  const double cut = 1e-9 * std::max(sv.size() ? sv(0) : 0.0, 1.0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  RMat cand(s.m, 2 * rank);
  for (int i = 0; i < rank; ++i) {
    cand.col(2 * i) = svd.matrixU().col(i).real();
    cand.col(2 * i + 1) = svd.matrixU().col(i).imag();
  }
  RMat basis = real_span_basis(cand);
  if (basis.cols() != rank) fail("NumericalFailure", "corner is not dagger-closed numerically");
  return basis;
}

CMat random_element(const RMat& sub_basis, Rng& rng, const StarAlgebra& s) {
  RVec g(sub_basis.cols());
  for (int i = 0; i < g.size(); ++i) g(i) = rng.gaussian();
  return s.from_coeffs((sub_basis * g).cast<Complex>());
}

// Matrix units of one block: u[i * a + j] with u_ij * u_kl = delta_jk u_il.
std::optional<std::vector<CMat>> block_matrix_units(const StarAlgebra& s, const CMat& z,
                                                    const RMat& corner, int a, Rng& rng,
                                                    double check_tol) {
  if (a == 1) return std::vector<CMat>{z};
  // Minimal projections from a maximal abelian subalgebra.
  std::vector<CMat> q;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const CMat h = random_element(corner, rng, s);
    const CVec hc = s.coeffs(h);
    const CMat comm = s.left_mult(hc) - s.right_mult(hc);
    const CMat restricted = comm * corner.cast<Complex>();
    Eigen::JacobiSVD<CMat> svd(restricted, Eigen::ComputeFullV);
    const RVec sv = svd.singularValues();
    const double cut = 1e-7 * std::max(sv.size() ? sv(0) : 0.0, 1.0);
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    const int kernel = int(corner.cols()) - rank;
    if (kernel != a) continue;  // h was degenerate; try again
    RMat cand(s.m, 2 * a);
    for (int i = 0; i < a; ++i) {
      const CVec v = corner.cast<Complex>() * svd.matrixV().col(rank + i);
      cand.col(2 * i) = v.real();
      cand.col(2 * i + 1) = v.imag();
    }
    const RMat abelian = real_span_basis(cand);
    if (abelian.cols() != a) continue;
    auto split = split_commutative(s, abelian, hc, check_tol);
    if (!split) continue;
    q = std::move(*split);
    break;
  }
  if (q.empty()) return std::nullopt;

  // Partial isometries u_1i linking the minimal projections.
  std::vector<CMat> u(size_t(a) * a);
  u[0] = q[0];
  std::vector<CMat> u1(a);  // u_0i
  u1[0] = q[0];
  for (int i = 1; i < a; ++i) {
    CMat w;
    bool found = false;
    for (int attempt = 0; attempt < 8 && !found; ++attempt) {
      const CMat g = random_element(corner, rng, s);
      w = s.star(q[0], s.star(g, q[i]));
      if (std::sqrt(std::abs(hs_inner(w, w))) > 1e-6) found = true;
    }
    if (!found) return std::nullopt;
    const CMat ww = s.star(w.adjoint(), w);
    const Complex t = hs_inner(q[i], ww) / hs_inner(q[i], q[i]);
    if (t.real() <= 1e-12 || max_abs(ww - t * q[i]) > check_tol * std::abs(t)) return std::nullopt;
    u1[i] = w / std::sqrt(t.real());
  }
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) {
      if (i == 0 && j == 0) continue;
      if (i == 0)
        u[j] = u1[j];
      else if (j == 0)
        u[size_t(i) * a] = u1[i].adjoint();
      else
        u[size_t(i) * a + j] = s.star(u1[i].adjoint(), u1[j]);
    }
  // Light diagnostics; the full decomposition is verified downstream.
  CMat diag_sum = CMat::Zero(s.d, s.d);
  for (int i = 0; i < a; ++i) diag_sum += u[size_t(i) * a + i];
  if (max_abs(diag_sum - z) > check_tol * 10) return std::nullopt;
  return u;
}

struct RawBlock {
  int a = 0;
  std::vector<CMat> units;  // a^2 matrix units
};

// One full extraction attempt; throws NumericalFailure on the blocking
// steps, returns nullopt on soft randomness failures worth retrying.
std::optional<BlockDecomposition> try_extract(const Channel& p, const StarAlgebra& s,
                                              const std::vector<CMat>& fixed_p, Tolerance tol,
                                              Rng& rng) {
  const int d = s.d;
  const double check_tol = std::max(tol.eps * 100, 1e-7);

  // Centre -> minimal central idempotents z_k.
  const RMat zbasis = center_basis(s);
  const int k_blocks = int(zbasis.cols());
  std::vector<CMat> z;
  if (k_blocks == 1) {
    z.push_back(CMat::Identity(d, d));
  } else {
    const CMat h = random_element(zbasis, rng, s);
    auto split = split_commutative(s, zbasis, s.coeffs(h), check_tol);
    if (!split) return std::nullopt;
    z = std::move(*split);
    CMat total = CMat::Zero(d, d);
    for (const CMat& zk : z) total += zk;
    if (max_abs(total - CMat::Identity(d, d)) > check_tol * 10) return std::nullopt;
  }

  // Corners -> matrix units per block.
  std::vector<RawBlock> raw;
  int dim_total = 0;
  for (const CMat& zk : z) {
    const RMat corner = corner_basis(s, zk);
    const int dim = int(corner.cols());
    const int a = int(std::lround(std::sqrt(double(dim))));
    if (a * a != dim) return std::nullopt;
    auto units = block_matrix_units(s, zk, corner, a, rng, check_tol);
    if (!units) return std::nullopt;
    raw.push_back(RawBlock{a, std::move(*units)});
    dim_total += dim;
  }
  if (dim_total != s.m) return std::nullopt;

  // Dual basis inside Fix(p): Y_(k,i,j) with Tr(u^k_ji Y_(l,i',j')) = deltas.
  const int m = s.m;
  CMat gram(m, m);
  {
    int row = 0;
    for (const RawBlock& blk : raw)
      for (int i = 0; i < blk.a; ++i)
        for (int j = 0; j < blk.a; ++j) {
          const CMat& u_ji = blk.units[size_t(j) * blk.a + i];
          for (int n = 0; n < m; ++n) gram(row, n) = (u_ji * fixed_p[n]).trace();
          ++row;
        }
  }
  const CMat coeff = gram.partialPivLu().solve(CMat::Identity(m, m));
  if (max_abs(gram * coeff - CMat::Identity(m, m)) > 1e-6)
    return std::nullopt;  // pairing matrix too ill-conditioned

  std::vector<std::vector<CMat>> duals(raw.size());
  {
    int col = 0;
    for (size_t kb = 0; kb < raw.size(); ++kb) {
      duals[kb].resize(size_t(raw[kb].a) * raw[kb].a);
      for (int i = 0; i < raw[kb].a; ++i)
        for (int j = 0; j < raw[kb].a; ++j) {
          CMat y = CMat::Zero(d, d);
          for (int n = 0; n < m; ++n) y += coeff(n, col) * fixed_p[n];
          duals[kb][size_t(i) * raw[kb].a + j] = std::move(y);
          ++col;
        }
    }
  }

  // tau states, support bases, aligned block columns.
  struct Extracted {
    int a = 0, b = 0;
    CMat tau;
    std::vector<CMat> support;  // support basis W_i (d x b) for each row index i
    const RawBlock* raw = nullptr;
    const std::vector<CMat>* duals = nullptr;
    std::vector<double> spectrum;
  };
  std::vector<Extracted> ext;
  for (size_t kb = 0; kb < raw.size(); ++kb) {
    Extracted e;
    e.a = raw[kb].a;
    e.raw = &raw[kb];
    e.duals = &duals[kb];
    const CMat y11 = 0.5 * (duals[kb][0] + duals[kb][0].adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> eig(y11);
    const RVec ev = eig.eigenvalues();  // ascending
    const double top = std::max(ev.cwiseAbs().maxCoeff(), 1e-30);
    if (ev(0) < -check_tol * 10) return std::nullopt;  // tau must be PSD
    int b = 0;
    for (int i = 0; i < ev.size(); ++i)
      if (ev(i) > tol.eps * std::max(top, 1.0)) ++b;
    if (b == 0) return std::nullopt;
    CMat w1(d, b);
    e.spectrum.resize(b);
    for (int i = 0; i < b; ++i) {  // descending eigenvalue order
      w1.col(i) = eig.eigenvectors().col(ev.size() - 1 - i);
      e.spectrum[i] = ev(ev.size() - 1 - i);
    }
    e.b = b;
    e.tau = w1.adjoint() * y11 * w1;
    const double tr = e.tau.trace().real();
    if (std::abs(tr - 1.0) > 1e-6) return std::nullopt;  // duality fixes Tr tau = 1
    e.tau /= tr;
    e.support.push_back(w1);
    for (int i = 1; i < e.a; ++i) {
      const CMat& zi = duals[kb][size_t(i) * e.a];  // Y_(k,i,0)
      Eigen::JacobiSVD<CMat> svd(zi, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const RVec sv = svd.singularValues();
      const double cut = tol.eps * std::max(sv(0), 1.0);
      int rank = 0;
      while (rank < sv.size() && sv(rank) > cut) ++rank;
      if (rank != b) return std::nullopt;
      const CMat polar = svd.matrixU().leftCols(rank) * svd.matrixV().leftCols(rank).adjoint();
      e.support.push_back(polar * w1);
    }
    ext.push_back(std::move(e));
  }

  // Deterministic block order: dimA desc, dimB desc, then tau spectrum.
  std::sort(ext.begin(), ext.end(), [](const Extracted& x, const Extracted& y) {
    if (x.a != y.a) return x.a > y.a;
    if (x.b != y.b) return x.b > y.b;
    return x.spectrum > y.spectrum;
  });

  // Assemble the decomposition.
  BlockDecomposition dec{
      {}, CMat::Zero(d, d), 0, Channel::zero(p.dom(), p.dom()), Channel::zero(p.dom(), p.dom()),
      Channel::zero(p.dom(), p.dom())};
  const CompositeSystem ambient({d});
  std::vector<int> adims;
  int col = 0;
  for (const Extracted& e : ext) {
    adims.push_back(e.a);
    for (int i = 0; i < e.a; ++i)
      for (int beta = 0; beta < e.b; ++beta) dec.basis.col(col++) = e.support[i].col(beta);
  }
  dec.residual_dim = d - col;
  if (dec.residual_dim < 0) return std::nullopt;
  if (dec.residual_dim > 0) {
    // Complete with an orthonormal basis of the residual subspace.
    const CMat w = dec.basis.leftCols(col);
    CMat compl_proj = CMat::Identity(d, d) - w * w.adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> eig(compl_proj);
    for (int i = 0; i < dec.residual_dim; ++i)
      dec.basis.col(col + i) = eig.eigenvectors().col(d - 1 - i);
  }
  if (max_abs(CMat(dec.basis.adjoint() * dec.basis) - CMat::Identity(d, d)) > check_tol * 10)
    return std::nullopt;

  const CompositeSystem splitter(adims);
  CMat split_m = CMat::Zero(ambient.coord_dim(), splitter.coord_dim());
  CMat split_e = CMat::Zero(splitter.coord_dim(), ambient.coord_dim());
  for (size_t kb = 0; kb < ext.size(); ++kb) {
    const Extracted& e = ext[kb];
    const int a = e.a;
    CMat sm(ambient.coord_dim(), a * a);
    CMat se(a * a, ambient.coord_dim());
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < a; ++j) {
        const CMat& y = (*e.duals)[size_t(i) * a + j];
        const CMat& u_ji = e.raw->units[size_t(j) * a + i];
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) {
            sm(r * d + c, i * a + j) = y(r, c);
            se(i * a + j, c * d + r) = u_ji(r, c);
          }
      }
    Block blk;
    blk.dim_a = a;
    blk.dim_b = e.b;
    blk.tau_rank = e.b;
    blk.tau = e.tau;
    blk.m = Channel(CompositeSystem({a}), ambient, sm);
    blk.e = Channel(ambient, CompositeSystem({a}), se);
    split_m.middleCols(splitter.block_offset(int(kb)), a * a) = sm;
    split_e.middleRows(splitter.block_offset(int(kb)), a * a) = se;
    dec.blocks.push_back(std::move(blk));
  }
  dec.split_m = Channel(splitter, ambient, split_m);
  dec.split_e = Channel(ambient, splitter, split_e);
  dec.q = Channel::zero(ambient, ambient);
  for (const Block& blk : dec.blocks) dec.q = dec.q.plus(blk.m.compose(blk.e));
  return dec;
}

}  // namespace

std::vector<CMat> fixed_point_space(const Channel& c, Tolerance tol) {
  if (!(c.dom() == c.cod())) fail("NotEndomorphism", "fixed points need dom = cod");
  if (c.dom().blocks() != 1) fail("Unsupported", "fixed-point spaces are for single blocks");
  const int d = c.dom().total_dim();
  const int n = c.dom().coord_dim();
  const CMat diff = c.superop() - CMat::Identity(n, n);
  Eigen::JacobiSVD<CMat> svd(diff, Eigen::ComputeFullV);
  const RVec sv = svd.singularValues();  // descending
  const double cut = tol.eps * std::max(sv.size() ? sv(0) : 0.0, 1.0);
  std::vector<CMat> kernel;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cut) {
      CMat x(d, d);
      for (int r = 0; r < d; ++r)
        for (int cc = 0; cc < d; ++cc) x(r, cc) = svd.matrixV()(r * d + cc, i);
      kernel.push_back(std::move(x));
    }
  }
  return hermitian_basis(kernel, int(kernel.size()));
}

BlockDecomposition decompose_cptp_idempotent(const Channel& p, Tolerance tol) {
  if (!(p.dom() == p.cod())) fail("NotEndomorphism", "decomposition needs dom = cod");
  if (p.dom().blocks() != 1)
    fail("Unsupported", "the decomposition engine handles single-block systems");
  const quant::ChannelChecks checks = validate_channel(p, tol);
  if (!checks.cp || !checks.tp) fail("NotCPTP", "the channel must be completely positive and trace preserving");
  if (max_abs(CMat(p.superop() * p.superop() - p.superop())) > tol.eps)
    fail("NotIdempotent", "p . p differs from p beyond tolerance");

  const StarAlgebra s = build_star_algebra(p, tol);
  const std::vector<CMat> fixed_p = fixed_point_space(p, tol);
  if (int(fixed_p.size()) != s.m)
    fail("NumericalFailure", "fixed spaces of p and its adjoint have different dimensions");

  double best_residual = -1.0;
  std::optional<BlockDecomposition> best;
  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng(0xC0FFEEull + 0x9e3779b97f4a7c15ull * std::uint64_t(attempt));
    std::optional<BlockDecomposition> dec;
    try {
      dec = try_extract(p, s, fixed_p, tol, rng);
    } catch (const Error&) {
      dec.reset();
    }
    if (!dec) continue;
    const DecompositionReport report = verify_decomposition(p, *dec, tol);
    if (report.pass) return std::move(*dec);
    if (best_residual < 0 || report.max_residual < best_residual) {
      best_residual = report.max_residual;
      best = std::move(dec);
    }
  }
  if (best && best_residual <= 10 * tol.eps) return std::move(*best);
  fail("NumericalFailure", "verification residual stayed above 10*tol after retries");
}

DecompositionReport verify_decomposition(const Channel& p, const BlockDecomposition& dec,
                                         Tolerance tol) {
  DecompositionReport report;
  auto add = [&](const std::string& name, double residual) {
    report.checks.push_back(CheckResult{name, residual, residual <= tol.eps});
    report.max_residual = std::max(report.max_residual, residual);
  };

  const CompositeSystem& ambient = p.dom();
  int covered = 0;
  for (size_t k = 0; k < dec.blocks.size(); ++k) {
    const Block& blk = dec.blocks[k];
    const std::string tag = "block" + std::to_string(k) + " ";
    const Channel em = blk.e.compose(blk.m);
    add(tag + "e.m = id", em.distance(Channel::identity(blk.m.dom())));
    add(tag + "m causal",
        Channel::discard(ambient).compose(blk.m).distance(Channel::discard(blk.m.dom())));
    add(tag + "tau trace 1", std::abs(blk.tau.trace().real() - 1.0));
    Eigen::SelfAdjointEigenSolver<CMat> eig(0.5 * (blk.tau + blk.tau.adjoint()));
    add(tag + "tau PSD", std::max(0.0, -eig.eigenvalues().minCoeff()));
    covered += blk.dim_a * blk.dim_b;
  }
  add("coverage: sum dimA*dimB + residual = D",
      std::abs(double(covered + dec.residual_dim - ambient.total_dim())));
  add("basis unitary",
      max_abs(CMat(dec.basis.adjoint() * dec.basis) -
              CMat::Identity(ambient.total_dim(), ambient.total_dim())));

  double cross = 0.0;
  for (size_t j = 0; j < dec.blocks.size(); ++j)
    for (size_t k = 0; k < dec.blocks.size(); ++k) {
      if (j == k) continue;
      const Channel pj = dec.blocks[j].m.compose(dec.blocks[j].e);
      const Channel pk = dec.blocks[k].m.compose(dec.blocks[k].e);
      cross = std::max(cross, pj.compose(pk).distance(Channel::zero(ambient, ambient)));
    }
  add("cross-block orthogonality", cross);

  Channel qsum = Channel::zero(ambient, ambient);
  for (const Block& blk : dec.blocks) qsum = qsum.plus(blk.m.compose(blk.e));
  add("q = sum m_k.e_k", qsum.distance(dec.q));
  add("q idempotent", dec.q.compose(dec.q).distance(dec.q));
  add("p.q = q", p.compose(dec.q).distance(dec.q));
  add("q.p = p", dec.q.compose(p).distance(p));

  // Splitting of q over the direct-sum system, transferred to p.
  add("split: e.m = id over the sum",
      dec.split_e.compose(dec.split_m).distance(Channel::identity(dec.split_m.dom())));
  add("split: m.e = q", dec.split_m.compose(dec.split_e).distance(dec.q));
  const Channel ep = dec.split_e.compose(p);
  add("transfer: (e.p).m = id", ep.compose(dec.split_m).distance(Channel::identity(dec.split_m.dom())));
  add("transfer: m.(e.p) = p", dec.split_m.compose(ep).distance(p));

  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const CheckResult& c) { return c.pass; });
  return report;
}

std::pair<Channel, BlockDecomposition> random_idempotent_instance(
    const std::vector<std::pair<int, int>>& spec, std::uint64_t seed) {
  if (spec.empty()) fail("EmptySpec", "the block spec must be nonempty");
  int d = 0;
  for (auto [a, b] : spec) {
    if (a < 1 || b < 1) fail("EmptySpec", "block dimensions must be positive");
    d += a * b;
  }
  Rng rng(seed);
  const CMat u = quant::haar_unitary(d, rng);
  const CompositeSystem ambient({d});

  BlockDecomposition dec{
      {}, u, 0, Channel::zero(ambient, ambient), Channel::zero(ambient, ambient),
      Channel::zero(ambient, ambient)};
  std::vector<int> adims;
  for (auto [a, b] : spec) adims.push_back(a);
  const CompositeSystem splitter(adims);
  CMat split_m = CMat::Zero(ambient.coord_dim(), splitter.coord_dim());
  CMat split_e = CMat::Zero(splitter.coord_dim(), ambient.coord_dim());

  int offset = 0;
  for (size_t kb = 0; kb < spec.size(); ++kb) {
    const auto [a, b] = spec[kb];
    const CMat tau = quant::random_density(b, rng);
    CMat sm(ambient.coord_dim(), a * a);
    CMat se(a * a, ambient.coord_dim());
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < a; ++j) {
        CMat planted = CMat::Zero(d, d);
        planted.block(offset + i * b, offset + j * b, b, b) = tau;
        const CMat y = u * planted * u.adjoint();
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) sm(r * d + c, i * a + j) = y(r, c);
        // e_k(X)_ij = sum_beta (U^dag X U)(off + i*b + beta, off + j*b + beta)
        for (int alpha = 0; alpha < d; ++alpha)
          for (int alpha2 = 0; alpha2 < d; ++alpha2) {
            Complex v = 0.0;
            for (int beta = 0; beta < b; ++beta)
              v += std::conj(u(alpha, offset + i * b + beta)) * u(alpha2, offset + j * b + beta);
            se(i * a + j, alpha * d + alpha2) = v;
          }
      }
    Block blk;
    blk.dim_a = a;
    blk.dim_b = b;
    blk.tau_rank = b;
    blk.tau = tau;
    blk.m = Channel(CompositeSystem({a}), ambient, sm);
    blk.e = Channel(ambient, CompositeSystem({a}), se);
    split_m.middleCols(splitter.block_offset(int(kb)), a * a) = sm;
    split_e.middleRows(splitter.block_offset(int(kb)), a * a) = se;
    dec.blocks.push_back(std::move(blk));
    offset += a * b;
  }
  dec.split_m = Channel(splitter, ambient, split_m);
  dec.split_e = Channel(ambient, splitter, split_e);
  dec.q = Channel::zero(ambient, ambient);
  for (const Block& blk : dec.blocks) dec.q = dec.q.plus(blk.m.compose(blk.e));
  return {dec.q, dec};
}

// ============================ nonnegative idempotents ============================

FlorDecomposition flor_decompose(const RMat& p, Tolerance tol) {
  if (p.rows() != p.cols()) fail("ShapeMismatch", "Flor decomposition needs a square matrix");
  const int n = int(p.rows());
  if (n > 0 && p.minCoeff() < -tol.eps)
    fail("ShapeMismatch", "the matrix must be entrywise nonnegative");
  if (n > 0 && (p * p - p).cwiseAbs().maxCoeff() > std::max(tol.eps, 1e-12) * 10)
    fail("NotIdempotent", "p . p differs from p");

  FlorDecomposition out;
  if (n == 0) return out;

  Eigen::JacobiSVD<RMat> svd(p);
  const RVec sv = svd.singularValues();
  const double cut = tol.eps * std::max(sv.size() ? sv(0) : 0.0, 1.0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;

  // Indices j with P_jj > 0 split into groups with proportional columns, one
  // group per rank-one piece; columns off the support mix several pieces and
  // never have a positive diagonal.
  const double diag_cut = 10 * std::max(tol.eps, 1e-12);
  std::vector<std::vector<int>> groups;
  std::vector<RVec> reps;  // max-normalised representative columns
  for (int j = 0; j < n; ++j) {
    if (p(j, j) <= diag_cut) continue;
    RVec cj = p.col(j);
    cj /= cj.maxCoeff();
    bool placed = false;
    for (size_t g = 0; g < groups.size(); ++g) {
      if ((cj - reps[g]).cwiseAbs().maxCoeff() <= 1e-6) {
        groups[g].push_back(j);
        placed = true;
        break;
      }
    }
    if (!placed) {
      groups.push_back({j});
      reps.push_back(cj);
    }
  }
  if (int(groups.size()) != rank)
    fail("NumericalFailure", "support analysis found a group count different from the rank");

  for (const auto& group : groups) {
    int jstar = group[0];
    for (int j : group)
      if (p(j, j) > p(jstar, jstar)) jstar = j;
    const double s = std::sqrt(p(jstar, jstar));
    RVec u = p.col(jstar) / s;
    RVec v = p.row(jstar).transpose() / s;
    if (u.minCoeff() < -10 * tol.eps || v.minCoeff() < -10 * tol.eps)
      fail("NumericalFailure", "extracted factors left the nonnegative cone");
    out.pairs.emplace_back(u.cwiseMax(0.0), v.cwiseMax(0.0));
  }

  // Verification gate for the heuristic support analysis.
  RMat sum = RMat::Zero(n, n);
  double biorth = 0.0;
  for (size_t i = 0; i < out.pairs.size(); ++i) {
    sum += out.pairs[i].first * out.pairs[i].second.transpose();
    for (size_t j = 0; j < out.pairs.size(); ++j) {
      const double dot = out.pairs[j].second.dot(out.pairs[i].first);
      biorth = std::max(biorth, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  if ((sum - p).cwiseAbs().maxCoeff() > 10 * tol.eps || biorth > 10 * tol.eps)
    fail("NumericalFailure", "extracted pairs fail verification");
  return out;
}

// ============================== boolean splittings ==============================

std::optional<BoolSplitting> search_splitting_bool(const mat::BoolMatrix& p, int b_max) {
  if (p.rows() != p.cols()) fail("ShapeMismatch", "splitting search needs a square matrix");
  const int n = p.rows();
  if (!(p.matmul(p) == p)) fail("NotIdempotent", "the relation is not idempotent");

  for (int b = 0; b <= b_max; ++b) {
    if (b == 0) {
      if (p.is_zero()) return BoolSplitting{mat::BoolMatrix(n, 0), mat::BoolMatrix(0, n)};
      continue;
    }
    const int bits_m = n * b, bits_e = b * n;
    if (bits_m + bits_e > 28)
      fail("Unsupported", "exhaustive search space exceeds 2^28 pairs");
    const std::uint64_t m_count = 1ull << bits_m, e_count = 1ull << bits_e;
    for (std::uint64_t mc = 0; mc < m_count; ++mc) {
      // m is n x b, bit t = entry (t / b, t % b).
      std::vector<std::uint32_t> mrow(n, 0), mcol(b, 0);
      for (int t = 0; t < bits_m; ++t)
        if ((mc >> t) & 1ull) {
          mrow[t / b] |= 1u << (t % b);
          mcol[t % b] |= 1u << (t / b);
        }
      for (std::uint64_t ec = 0; ec < e_count; ++ec) {
        std::vector<std::uint32_t> erow(b, 0), ecol(n, 0);
        for (int t = 0; t < bits_e; ++t)
          if ((ec >> t) & 1ull) {
            erow[t / n] |= 1u << (t % n);
            ecol[t % n] |= 1u << (t / n);
          }
        bool ok = true;
        for (int i = 0; i < b && ok; ++i)
          for (int j = 0; j < b && ok; ++j)
            if (((erow[i] & mcol[j]) != 0) != (i == j)) ok = false;
        for (int i = 0; i < n && ok; ++i)
          for (int j = 0; j < n && ok; ++j)
            if (((mrow[i] & ecol[j]) != 0) != (p(i, j) != 0)) ok = false;
        if (!ok) continue;
        mat::BoolMatrix m(n, b), e(b, n);
        for (int t = 0; t < bits_m; ++t)
          if ((mc >> t) & 1ull) m.set(t / b, t % b, true);
        for (int t = 0; t < bits_e; ++t)
          if ((ec >> t) & 1ull) e.set(t / n, t % n, true);
        return BoolSplitting{std::move(m), std::move(e)};
      }
    }
  }
  return std::nullopt;
}

}  // namespace karoubi::decompose
