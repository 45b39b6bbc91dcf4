#include "karoubi/leaks.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "karoubi/mat.hpp"

namespace karoubi::leaks {

using quant::Channel;
using quant::CompositeSystem;

namespace {

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_leak_shape(const LeakCandidate& lc) {
  const Theory& t = lc.l.theory();
  if (!t.obj_equal(lc.l.dom(), lc.system) ||
      !t.obj_equal(lc.l.cod(), t.tensor_obj(lc.system, lc.env)))
    fail("ShapeMismatch", "leak candidate must have shape A -> A (x) L");
}

Mor counit_composite(const LeakCandidate& lc) {
  const Theory& t = lc.l.theory();
  return t.compose(t.tensor(t.identity(lc.system), t.discard(lc.env)), lc.l);
}

}  // namespace

bool is_leak(const LeakCandidate& lc, Tolerance tol) {
  require_leak_shape(lc);
  const Theory& t = lc.l.theory();
  return t.approx_eq(counit_composite(lc), t.identity(lc.system), tol);
}

Mor idempotent_from_leakage(const LeakCandidate& lc, Tolerance tol) {
  require_leak_shape(lc);
  Mor iota = counit_composite(lc);
  if (!is_idempotent(iota, tol))
    fail("NotIdempotent", "the leaked process iota is not idempotent");
  return iota;
}

LeakCandidate leak_from_idempotent_trivial(const Mor& p, Tolerance tol) {
  if (!is_idempotent(p, tol)) fail("NotIdempotent", "p . p differs from p");
  const Theory& t = p.theory();
  // A (x) I is A itself in the strictified representation, so p already has
  // the right shape.
  return LeakCandidate{p, p.dom(), t.unit()};
}

LeakCandidate stinespring_leak(const Channel& p, Tolerance tol) {
  if (!(p.dom() == p.cod()) || p.dom().blocks() != 1)
    fail("NotCausalIdempotent", "stinespring leaks live on single-block endomorphisms");
  const quant::ChannelChecks checks = validate_channel(p, tol);
  if (!checks.cp || !checks.tp)
    fail("NotCausalIdempotent", "the channel must be CPTP");
  if (max_abs(CMat(p.superop() * p.superop() - p.superop())) > tol.eps)
    fail("NotCausalIdempotent", "the channel must be idempotent");

  const int d = p.dom().total_dim();
  const CMat j = 0.5 * (p.choi() + p.choi().adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig(j);
  const RVec ev = eig.eigenvalues();  // ascending
  const double cut = tol.eps * std::max(ev.cwiseAbs().maxCoeff(), 1.0);
  std::vector<CMat> kraus;
  for (int t = int(ev.size()) - 1; t >= 0; --t) {
    if (ev(t) <= cut) break;
    CMat k(d, d);
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < d; ++a) k(a, i) = std::sqrt(ev(t)) * eig.eigenvectors()(i * d + a, t);
    kraus.push_back(std::move(k));
  }
  const int r = int(kraus.size());
  if (r == 0) fail("NotCausalIdempotent", "the channel has empty Kraus rank");

  // V = sum_t K_t (x) |t> : C^d -> C^d (x) C^r, an isometry since p is TP.
  CMat v = CMat::Zero(d * r, d);
  for (int t = 0; t < r; ++t)
    for (int a = 0; a < d; ++a)
      for (int i = 0; i < d; ++i) v(a * r + t, i) = kraus[t](a, i);
  if (max_abs(CMat(v.adjoint() * v) - CMat::Identity(d, d)) > 1e-8)
    fail("NumericalFailure", "stinespring dilation is not an isometry");

  LeakCandidate lc{quant::quant_mor(quant::pure_embed(quant::PureMap{v})),
                   quant::quant_obj(p.dom()), quant::quant_obj(CompositeSystem({r}))};
  // Discarding the environment must reproduce p, and l must be a leak for
  // the system (A, p) of the restricted theory: p . iota . p = p.
  const Theory& t = lc.l.theory();
  Mor iota = counit_composite(lc);
  Mor pm = quant::quant_mor(p);
  if (t.distance(iota, pm) > 10 * tol.eps)
    fail("NumericalFailure", "discarding the dilation environment does not give p back");
  if (t.distance(t.compose(pm, t.compose(iota, pm)), pm) > 10 * tol.eps)
    fail("NumericalFailure", "p . iota . p differs from p");
  return lc;
}

LeakCandidate broadcasting_map(const std::shared_ptr<const Theory>& theory, int n) {
  if (theory == quant::quant_theory())
    fail("NotSupported", "quantum systems only admit constant leaks; no broadcasting");
  LeakCandidate lc;
  if (theory == mat::frel_theory()) {
    mat::BoolMatrix delta(n * n, n);
    for (int i = 0; i < n; ++i) delta.set(i * n + i, i, true);
    lc.l = mat::bool_mor(theory, delta);
  } else if (theory == mat::class_theory()) {
    RMat delta = RMat::Zero(n * n, n);
    for (int i = 0; i < n; ++i) delta(i * n + i, i) = 1.0;
    lc.l = mat::real_mor(theory, delta);
  } else {
    fail("NotSupported", "broadcasting is defined for the classical matrix theories");
  }
  lc.system = mat::mat_obj(theory, n);
  lc.env = lc.system;
  return lc;
}

bool has_left_counit(const LeakCandidate& lc, Tolerance tol) {
  require_leak_shape(lc);
  const Theory& t = lc.l.theory();
  if (!t.obj_equal(lc.system, lc.env))
    fail("ShapeMismatch", "a left counit needs L = A");
  Mor composite = t.compose(t.tensor(t.discard(lc.system), t.identity(lc.system)), lc.l);
  return t.approx_eq(composite, t.identity(lc.system), tol);
}

bool leak_tensor_compatible(const LeakCandidate& la, const LeakCandidate& lb,
                            const LeakCandidate& lab, Tolerance tol) {
  const Theory& t = la.l.theory();
  Mor iota_a = counit_composite(la);
  Mor iota_b = counit_composite(lb);
  Mor iota_ab = counit_composite(lab);
  return t.approx_eq(iota_ab, t.tensor(iota_a, iota_b), tol);
}

// ------------------------------ Frobenius fragment ------------------------------

FrobeniusReport verify_frobenius(const FrobeniusStructure& fs, Tolerance tol) {
  const int d = fs.dim;
  if (fs.delta.rows() != d * d || fs.delta.cols() != d)
    fail("ShapeMismatch", "delta must be a d^2 x d matrix");
  const CMat id = CMat::Identity(d, d);
  auto kron = [](const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  FrobeniusReport rep;
  const CMat co_l = kron(fs.delta, id) * fs.delta;
  const CMat co_r = kron(id, fs.delta) * fs.delta;
  rep.coassoc_residual = max_abs(co_l - co_r);
  const CMat frob_l = kron(id, fs.delta.adjoint()) * kron(fs.delta, id);
  const CMat frob_r = kron(fs.delta.adjoint(), id) * kron(id, fs.delta);
  rep.frobenius_residual = max_abs(frob_l - frob_r);
  rep.special_residual = max_abs(CMat(fs.delta.adjoint() * fs.delta) - id);
  rep.coassoc = rep.coassoc_residual <= tol.eps;
  rep.frobenius_law = rep.frobenius_residual <= tol.eps;
  rep.special = rep.special_residual <= tol.eps;
  return rep;
}

Channel decoherence_idempotent(const FrobeniusStructure& fs, Tolerance tol) {
  const FrobeniusReport rep = verify_frobenius(fs, tol);
  if (!rep.special)
    fail("NotSpecial", "the decoherence channel needs delta^dag . delta = id");
  const int d = fs.dim;
  // X -> Tr_1(delta X delta^dag): embed delta, then trace out the first leg.
  const Channel embed = quant::pure_embed(quant::PureMap{fs.delta});
  quant::KrausSet partial;
  for (int i = 0; i < d; ++i) {
    CMat k = CMat::Zero(d, d * d);
    k.block(0, i * d, d, d) = CMat::Identity(d, d);
    partial.ops.push_back(std::move(k));
  }
  const Channel tr_first =
      Channel::from_kraus(partial, CompositeSystem({d * d}), CompositeSystem({d}));
  Channel c = tr_first.compose(embed);
  if (max_abs(CMat(c.superop() * c.superop() - c.superop())) > 10 * tol.eps)
    fail("NotIdempotent", "the comultiplication does not induce an idempotent");
  return c;
}

FrobeniusStructure copy_delta(int d) {
  CMat delta = CMat::Zero(d * d, d);
  for (int i = 0; i < d; ++i) delta(i * d + i, i) = 1.0;
  return FrobeniusStructure{d, std::move(delta)};
}

FrobeniusStructure pants_delta(int n) {
  // mu(E_ij (x) E_kl) = delta_jk E_il on A = M_n carried by C^{n^2}.
  const int d = n * n;
  CMat mu = CMat::Zero(d, d * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        mu(i * n + l, (i * n + j) * d + (j * n + l)) = 1.0;
  CMat delta = mu.adjoint() / std::sqrt(double(n));
  return FrobeniusStructure{d, std::move(delta)};
}

}  // namespace karoubi::leaks
