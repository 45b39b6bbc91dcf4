#include "karoubi/quant.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace karoubi::quant {

namespace {

CMat ckron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double max_abs(const CMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// For each coordinate of a tensor system, the pair of factor coordinates.
std::vector<std::pair<int, int>> tensor_coord_map(const CompositeSystem& a,
                                                  const CompositeSystem& b) {
  const CompositeSystem t = a.tensor(b);
  std::vector<std::pair<int, int>> map(t.coord_dim());
  for (int k = 0; k < a.blocks(); ++k)
    for (int l = 0; l < b.blocks(); ++l) {
      const int kt = k * b.blocks() + l;
      const int dk = a.dim(k), el = b.dim(l);
      for (int i1 = 0; i1 < dk; ++i1)
        for (int i2 = 0; i2 < el; ++i2)
          for (int j1 = 0; j1 < dk; ++j1)
            for (int j2 = 0; j2 < el; ++j2) {
              const int ct = t.coord(kt, i1 * el + i2, j1 * el + j2);
              map[ct] = {a.coord(k, i1, j1), b.coord(l, i2, j2)};
            }
    }
  return map;
}

}  // namespace

CompositeSystem::CompositeSystem(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) fail("ShapeMismatch", "a composite system needs at least one block");
  for (int d : dims_) {
    if (d < 1) fail("ShapeMismatch", "block dimensions must be positive");
  }
  offsets_.reserve(dims_.size());
  hilbert_offsets_.reserve(dims_.size());
  for (int d : dims_) {
    offsets_.push_back(coord_dim_);
    hilbert_offsets_.push_back(total_dim_);
    coord_dim_ += d * d;
    total_dim_ += d;
  }
}

CompositeSystem CompositeSystem::tensor(const CompositeSystem& rhs) const {
  std::vector<int> dims;
  dims.reserve(dims_.size() * rhs.dims_.size());
  for (int d : dims_)
    for (int e : rhs.dims_) dims.push_back(d * e);
  return CompositeSystem(dims);
}

std::string CompositeSystem::repr() const {
  std::ostringstream os;
  os << "[";
  for (size_t k = 0; k < dims_.size(); ++k) os << (k ? "," : "") << dims_[k];
  os << "]";
  return os.str();
}

CVec CompositeSystem::vectorize(const CMat& op) const {
  if (op.rows() != total_dim_ || op.cols() != total_dim_)
    fail("ShapeMismatch", "operator size does not match the system");
  CVec v(coord_dim_);
  for (int k = 0; k < blocks(); ++k) {
    const int d = dims_[k], h = hilbert_offsets_[k];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) v(coord(k, i, j)) = op(h + i, h + j);
  }
  return v;
}

CMat CompositeSystem::devectorize(const CVec& coords) const {
  if (coords.size() != coord_dim_) fail("ShapeMismatch", "coordinate vector size mismatch");
  CMat op = CMat::Zero(total_dim_, total_dim_);
  for (int k = 0; k < blocks(); ++k) {
    const int d = dims_[k], h = hilbert_offsets_[k];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) op(h + i, h + j) = coords(coord(k, i, j));
  }
  return op;
}

bool phase_equal(const PureMap& f, const PureMap& g, Tolerance tol) {
  if (f.mat.rows() != g.mat.rows() || f.mat.cols() != g.mat.cols()) return false;
  double gmax = max_abs(g.mat), fmax = max_abs(f.mat);
  if (gmax <= tol.eps || fmax <= tol.eps) return gmax <= tol.eps && fmax <= tol.eps;
  // Read the phase off the largest entry of g, then compare entrywise.
  int bi = 0, bj = 0;
  g.mat.cwiseAbs().maxCoeff(&bi, &bj);
  if (std::abs(f.mat(bi, bj)) <= tol.eps) return false;
  Complex phase = f.mat(bi, bj) / g.mat(bi, bj);
  phase /= std::abs(phase);
  return max_abs(f.mat - phase * g.mat) <= tol.eps;
}

Channel::Channel(CompositeSystem dom, CompositeSystem cod, CMat superop)
    : dom_(std::move(dom)), cod_(std::move(cod)), superop_(std::move(superop)) {
  if (superop_.rows() != cod_.coord_dim() || superop_.cols() != dom_.coord_dim())
    fail("ShapeMismatch", "superoperator shape does not match dom/cod systems");
}

Channel Channel::identity(const CompositeSystem& sys) {
  return Channel(sys, sys, CMat::Identity(sys.coord_dim(), sys.coord_dim()));
}

Channel Channel::zero(const CompositeSystem& dom, const CompositeSystem& cod) {
  return Channel(dom, cod, CMat::Zero(cod.coord_dim(), dom.coord_dim()));
}

Channel Channel::discard(const CompositeSystem& sys) {
  CMat row = CMat::Zero(1, sys.coord_dim());
  for (int k = 0; k < sys.blocks(); ++k)
    for (int i = 0; i < sys.dim(k); ++i) row(0, sys.coord(k, i, i)) = 1.0;
  return Channel(sys, CompositeSystem::unit(), row);
}

Channel Channel::from_kraus(const KrausSet& ks, const CompositeSystem& dom,
                            const CompositeSystem& cod) {
  if (dom.blocks() != 1 || cod.blocks() != 1)
    fail("ShapeMismatch", "Kraus representations are for single-block systems");
  const int din = dom.dim(0), dout = cod.dim(0);
  CMat s = CMat::Zero(cod.coord_dim(), dom.coord_dim());
  for (const CMat& k : ks.ops) {
    if (k.rows() != dout || k.cols() != din)
      fail("ShapeMismatch", "Kraus operator shape does not match systems");
    s += ckron(k, k.conjugate());
  }
  return Channel(dom, cod, s);
}

CMat Channel::choi() const {
  const int din = dom_.total_dim(), dout = cod_.total_dim();
  CMat j = CMat::Zero(din * dout, din * dout);
  for (int kb = 0; kb < dom_.blocks(); ++kb) {
    const int d = dom_.dim(kb), h = dom_.hilbert_offset(kb);
    for (int i = 0; i < d; ++i)
      for (int jj = 0; jj < d; ++jj) {
        const CMat out = cod_.devectorize(superop_.col(dom_.coord(kb, i, jj)));
        const int gi = h + i, gj = h + jj;
        for (int k = 0; k < dout; ++k)
          for (int l = 0; l < dout; ++l) j(gi * dout + k, gj * dout + l) = out(k, l);
      }
  }
  return j;
}

Channel Channel::from_choi(const CMat& choi, const CompositeSystem& dom,
                           const CompositeSystem& cod, Tolerance tol) {
  const int din = dom.total_dim(), dout = cod.total_dim();
  if (choi.rows() != din * dout || choi.cols() != din * dout)
    fail("ShapeError", "Choi matrix size does not match dom/cod systems");
  CMat s(cod.coord_dim(), dom.coord_dim());
  for (int kb = 0; kb < dom.blocks(); ++kb) {
    const int d = dom.dim(kb), h = dom.hilbert_offset(kb);
    for (int i = 0; i < d; ++i)
      for (int jj = 0; jj < d; ++jj) {
        const int gi = h + i, gj = h + jj;
        for (int lb = 0; lb < cod.blocks(); ++lb) {
          const int e = cod.dim(lb), g = cod.hilbert_offset(lb);
          for (int k = 0; k < e; ++k)
            for (int l = 0; l < e; ++l)
              s(cod.coord(lb, k, l), dom.coord(kb, i, jj)) =
                  choi(gi * dout + (g + k), gj * dout + (g + l));
        }
      }
  }
  Channel ch(dom, cod, s);
  // Reject Choi matrices with weight outside the block structure: they do not
  // describe a map between these systems.
  if (max_abs(ch.choi() - choi) > std::max(tol.eps, 1e-9))
    fail("ShapeError", "Choi matrix has support outside the block structure");
  return ch;
}

Channel Channel::compose(const Channel& inner) const {
  if (!(inner.cod_ == dom_)) fail("ShapeMismatch", "channels are not composable");
  return Channel(inner.dom_, cod_, superop_ * inner.superop_);
}

Channel Channel::plus(const Channel& rhs) const {
  if (!(dom_ == rhs.dom_) || !(cod_ == rhs.cod_))
    fail("ShapeMismatch", "channel sum needs parallel channels");
  return Channel(dom_, cod_, superop_ + rhs.superop_);
}

Channel Channel::scaled(Complex s) const { return Channel(dom_, cod_, s * superop_); }

Channel Channel::tensor(const Channel& rhs) const {
  const CompositeSystem tdom = dom_.tensor(rhs.dom_);
  const CompositeSystem tcod = cod_.tensor(rhs.cod_);
  const auto dom_map = tensor_coord_map(dom_, rhs.dom_);
  const auto cod_map = tensor_coord_map(cod_, rhs.cod_);
  CMat s(tcod.coord_dim(), tdom.coord_dim());
  for (int r = 0; r < s.rows(); ++r)
    for (int c = 0; c < s.cols(); ++c)
      s(r, c) = superop_(cod_map[r].first, dom_map[c].first) *
                rhs.superop_(cod_map[r].second, dom_map[c].second);
  return Channel(tdom, tcod, s);
}

Channel Channel::adjoint() const { return Channel(cod_, dom_, superop_.adjoint()); }

CMat Channel::apply(const CMat& op) const { return cod_.devectorize(superop_ * dom_.vectorize(op)); }

double Channel::distance(const Channel& rhs) const {
  if (!(dom_ == rhs.dom_) || !(cod_ == rhs.cod_))
    fail("ShapeMismatch", "distance needs parallel channels");
  return max_abs(superop_ - rhs.superop_);
}

bool Channel::approx_eq(const Channel& rhs, Tolerance tol) const {
  return distance(rhs) <= tol.eps;
}

ChannelChecks validate_channel(const Channel& c, Tolerance tol) {
  ChannelChecks out;
  const CMat j = c.choi();
  out.herm_residual = max_abs(j - j.adjoint());
  const CMat jh = 0.5 * (j + j.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig(jh);
  out.choi_min_eig = j.size() == 0 ? 0.0 : eig.eigenvalues().minCoeff();
  out.cp = out.herm_residual <= tol.eps && out.choi_min_eig >= -tol.eps;

  const int din = c.dom().total_dim(), dout = c.cod().total_dim();
  CMat marginal = CMat::Zero(din, din);
  for (int i = 0; i < din; ++i)
    for (int jj = 0; jj < din; ++jj)
      for (int k = 0; k < dout; ++k) marginal(i, jj) += j(i * dout + k, jj * dout + k);
  out.tp_residual = max_abs(marginal - CMat::Identity(din, din));
  out.tp = out.tp_residual <= tol.eps;

  const CMat gap = CMat::Identity(din, din) - 0.5 * (marginal + marginal.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig2(gap);
  out.subcausal = max_abs(marginal - marginal.adjoint()) <= tol.eps &&
                  eig2.eigenvalues().minCoeff() >= -tol.eps;
  return out;
}

Channel pure_embed(const PureMap& f) {
  const CompositeSystem dom({int(f.mat.cols())}), cod({int(f.mat.rows())});
  return Channel::from_kraus(KrausSet{{f.mat}}, dom, cod);
}

QuantEmbedding disjoint_embedding(const std::vector<int>& dims) {
  int total = 0;
  for (int d : dims) total += d;
  if (total == 0) {
    // The empty embedding: target I with the zero idempotent.
    QuantEmbedding emb{CompositeSystem::unit(), {}, {},
                       Channel::zero(CompositeSystem::unit(), CompositeSystem::unit())};
    return emb;
  }
  QuantEmbedding emb{CompositeSystem({total}), {}, {}, Channel::zero(CompositeSystem({total}), CompositeSystem({total}))};
  int offset = 0;
  for (int d : dims) {
    CMat iso = CMat::Zero(total, d);
    for (int i = 0; i < d; ++i) iso(offset + i, i) = 1.0;
    Channel kappa = Channel::from_kraus(KrausSet{{iso}}, CompositeSystem({d}), emb.target);
    Channel pi = Channel::from_kraus(KrausSet{{CMat(iso.adjoint())}}, emb.target, CompositeSystem({d}));
    emb.pinch = emb.pinch.plus(kappa.compose(pi));
    emb.injections.push_back(std::move(kappa));
    emb.projections.push_back(std::move(pi));
    offset += d;
  }
  return emb;
}

EnvironmentCheck environment_axiom_check(const PureMap& f, const PureMap& g, Tolerance tol) {
  if (f.mat.rows() != g.mat.rows() || f.mat.cols() != g.mat.cols())
    fail("ShapeMismatch", "pure maps must have the same shape");
  EnvironmentCheck out;
  const Channel cf = pure_embed(f), cg = pure_embed(g);
  const Channel df = Channel::discard(cf.cod()).compose(cf);
  const Channel dg = Channel::discard(cg.cod()).compose(cg);
  out.discard_eq = df.approx_eq(dg, tol);
  out.gram_eq = max_abs(CMat(f.mat.adjoint() * f.mat) - CMat(g.mat.adjoint() * g.mat)) <= tol.eps;
  out.consistent = out.discard_eq == out.gram_eq;
  return out;
}

// -- theory wrapper -----------------------------------------------------------

namespace {

class QuantTheory final : public Theory {
 public:
  std::string name() const override { return "Quant"; }

  Obj make_obj(const CompositeSystem& sys) const {
    return Obj(shared_from_this(), std::make_shared<QuantObj>(sys));
  }

  Mor make_mor(const Channel& ch) const {
    return Mor(make_obj(ch.dom()), make_obj(ch.cod()), std::make_shared<QuantMor>(ch));
  }

  static const Channel& payload(const Mor& f) { return f.as<QuantMor>().ch; }

  Obj unit() const override { return make_obj(CompositeSystem::unit()); }

  bool obj_equal(const Obj& a, const Obj& b) const override {
    return a.as<QuantObj>().sys == b.as<QuantObj>().sys;
  }

  std::string obj_repr(const Obj& a) const override { return a.as<QuantObj>().sys.repr(); }

  Mor identity(const Obj& a) const override {
    return make_mor(Channel::identity(a.as<QuantObj>().sys));
  }

  Mor compose(const Mor& g, const Mor& f) const override {
    require_composable(g, f);
    return make_mor(payload(g).compose(payload(f)));
  }

  Mor sum(const Mor& f, const Mor& g) const override {
    require_parallel(f, g);
    return make_mor(payload(f).plus(payload(g)));
  }

  Mor zero(const Obj& dom, const Obj& cod) const override {
    return make_mor(Channel::zero(dom.as<QuantObj>().sys, cod.as<QuantObj>().sys));
  }

  Mor scale(const Mor& s, const Mor& f) const override {
    const Channel& sc = payload(s);
    if (sc.superop().rows() != 1 || sc.superop().cols() != 1)
      fail("ShapeMismatch", "scalar must be a morphism I -> I");
    return make_mor(payload(f).scaled(sc.superop()(0, 0)));
  }

  Mor discard(const Obj& a) const override {
    return make_mor(Channel::discard(a.as<QuantObj>().sys));
  }

  double distance(const Mor& f, const Mor& g) const override {
    require_parallel(f, g);
    return payload(f).distance(payload(g));
  }

  bool has_tensor() const override { return true; }

  Obj tensor_obj(const Obj& a, const Obj& b) const override {
    return make_obj(a.as<QuantObj>().sys.tensor(b.as<QuantObj>().sys));
  }

  Mor tensor(const Mor& f, const Mor& g) const override {
    return make_mor(payload(f).tensor(payload(g)));
  }

  bool has_adjoint() const override { return true; }

  Mor adjoint(const Mor& f) const override { return make_mor(payload(f).adjoint()); }

  bool cancellative() const override { return true; }

  bool subcausal(const Mor& f, Tolerance tol) const override {
    return validate_channel(payload(f), tol).subcausal;
  }

  Mor difference(const Mor& f, const Mor& g) const override {
    require_parallel(f, g);
    return make_mor(payload(f).plus(payload(g).scaled(-1.0)));
  }

  Mor uniform_causal_state(const Obj& a) const override {
    const CompositeSystem& sys = a.as<QuantObj>().sys;
    const CMat mixed = CMat::Identity(sys.total_dim(), sys.total_dim()) / double(sys.total_dim());
    const CMat col = sys.vectorize(mixed);
    return make_mor(Channel(CompositeSystem::unit(), sys, col));
  }

  Mor inv_scalar(const Mor& s) const override {
    const Channel& sc = payload(s);
    if (sc.superop().rows() != 1 || sc.superop().cols() != 1)
      fail("ShapeMismatch", "scalar must be a morphism I -> I");
    const Complex z = sc.superop()(0, 0);
    if (std::abs(z) < 1e-300) fail("Unsupported", "scalar too small to invert");
    CMat inv(1, 1);
    inv(0, 0) = 1.0 / z;
    return make_mor(Channel(CompositeSystem::unit(), CompositeSystem::unit(), inv));
  }

  Mor scalar(double v) const override {
    CMat s(1, 1);
    s(0, 0) = v;
    return make_mor(Channel(CompositeSystem::unit(), CompositeSystem::unit(), s));
  }

  Obj random_object(Rng& rng, int size_cap) const override {
    const int blocks = rng.uniform_int(1, 2);
    std::vector<int> dims;
    for (int k = 0; k < blocks; ++k) dims.push_back(rng.uniform_int(1, std::max(1, size_cap)));
    return make_obj(CompositeSystem(dims));
  }

  Mor random_morphism(const Obj& dom, const Obj& cod, Rng& rng) const override {
    return make_mor(random_cp(dom.as<QuantObj>().sys, cod.as<QuantObj>().sys, rng));
  }

  Mor random_causal(const Obj& dom, const Obj& cod, Rng& rng) const override {
    return make_mor(random_cptp(dom.as<QuantObj>().sys, cod.as<QuantObj>().sys, rng));
  }

  DisjointEmbedding disjoint_embedding(const std::vector<Obj>& parts) const override {
    bool all_single = true;
    for (const Obj& p : parts) all_single = all_single && p.as<QuantObj>().sys.blocks() == 1;
    DisjointEmbedding emb;
    if (all_single && !parts.empty()) {
      // Hilbert-space direct sum: the motivating embedding that is not a
      // biproduct (the pinch is a proper idempotent).
      std::vector<int> dims;
      for (const Obj& p : parts) dims.push_back(p.as<QuantObj>().sys.dim(0));
      QuantEmbedding qe = quant::disjoint_embedding(dims);
      emb.target = make_obj(qe.target);
      for (const Channel& k : qe.injections) emb.injections.push_back(make_mor(k));
      for (const Channel& p : qe.projections) emb.projections.push_back(make_mor(p));
      emb.pinch = make_mor(qe.pinch);
      return emb;
    }
    if (parts.empty()) {
      emb.target = unit();
      emb.pinch = zero(emb.target, emb.target);
      return emb;
    }
    // General composite systems: concatenate the block lists (the direct sum
    // of the algebras). This one is an honest biproduct.
    std::vector<int> dims;
    for (const Obj& p : parts)
      for (int d : p.as<QuantObj>().sys.dims()) dims.push_back(d);
    const CompositeSystem target(dims);
    emb.target = make_obj(target);
    int coord_offset = 0;
    for (const Obj& p : parts) {
      const CompositeSystem& sys = p.as<QuantObj>().sys;
      CMat inc = CMat::Zero(target.coord_dim(), sys.coord_dim());
      for (int c = 0; c < sys.coord_dim(); ++c) inc(coord_offset + c, c) = 1.0;
      Channel kappa(sys, target, inc);
      Channel pi(target, sys, inc.adjoint());
      emb.injections.push_back(make_mor(kappa));
      emb.projections.push_back(make_mor(pi));
      coord_offset += sys.coord_dim();
    }
    emb.pinch = zero(emb.target, emb.target);
    for (size_t i = 0; i < parts.size(); ++i)
      emb.pinch = sum(emb.pinch, compose(emb.injections[i], emb.projections[i]));
    return emb;
  }
};

}  // namespace

std::shared_ptr<const Theory> quant_theory() {
  static const std::shared_ptr<const Theory> instance = std::make_shared<QuantTheory>();
  return instance;
}

Obj quant_obj(const CompositeSystem& sys) {
  return std::static_pointer_cast<const QuantTheory>(quant_theory())->make_obj(sys);
}

Mor quant_mor(const Channel& ch) {
  return std::static_pointer_cast<const QuantTheory>(quant_theory())->make_mor(ch);
}

const Channel& channel_payload(const Mor& f) { return f.as<QuantMor>().ch; }

// -- random generators --------------------------------------------------------

CMat ginibre(int rows, int cols, Rng& rng) {
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.cgaussian();
  return m;
}

CMat haar_unitary(int d, Rng& rng) {
  const CMat g = ginibre(d, d, rng);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    Complex rii = r(i, i);
    q.col(i) *= std::abs(rii) > 0 ? rii / std::abs(rii) : Complex(1, 0);
  }
  return q;
}

CMat random_density(int d, Rng& rng) {
  const CMat g = ginibre(d, d, rng);
  CMat rho = g * g.adjoint();
  rho /= rho.trace();
  return rho;
}

CMat random_isometry(int rows, int cols, Rng& rng) {
  if (rows < cols) fail("ShapeMismatch", "an isometry needs rows >= cols");
  const CMat u = haar_unitary(rows, rng);
  return u.leftCols(cols);
}

Channel random_cp(const CompositeSystem& dom, const CompositeSystem& cod, Rng& rng,
                  int kraus_per_block) {
  CMat s = CMat::Zero(cod.coord_dim(), dom.coord_dim());
  for (int kb = 0; kb < dom.blocks(); ++kb)
    for (int lb = 0; lb < cod.blocks(); ++lb) {
      const int d = dom.dim(kb), e = cod.dim(lb);
      for (int t = 0; t < kraus_per_block; ++t) {
        const CMat k = ginibre(e, d, rng) / std::sqrt(double(d * e * kraus_per_block));
        for (int i = 0; i < e; ++i)
          for (int j = 0; j < e; ++j)
            for (int m = 0; m < d; ++m)
              for (int n = 0; n < d; ++n)
                s(cod.coord(lb, i, j), dom.coord(kb, m, n)) += k(i, m) * std::conj(k(j, n));
      }
    }
  return Channel(dom, cod, s);
}

Channel random_cptp(const CompositeSystem& dom, const CompositeSystem& cod, Rng& rng) {
  // One Stinespring isometry per input block, pinched onto the output blocks.
  const int dout = cod.total_dim();
  CMat s = CMat::Zero(cod.coord_dim(), dom.coord_dim());
  for (int kb = 0; kb < dom.blocks(); ++kb) {
    const int d = dom.dim(kb);
    const int env = std::max(2, (d + dout - 1) / dout);
    const CMat v = random_isometry(dout * env, d, rng);
    std::vector<CMat> ks;
    for (int e = 0; e < env; ++e) {
      CMat k(dout, d);
      for (int i = 0; i < dout; ++i) k.row(i) = v.row(i * env + e);
      ks.push_back(k);
    }
    for (int lb = 0; lb < cod.blocks(); ++lb) {
      const int dl = cod.dim(lb), h = cod.hilbert_offset(lb);
      for (const CMat& k : ks)
        for (int i = 0; i < dl; ++i)
          for (int j = 0; j < dl; ++j)
            for (int m = 0; m < d; ++m)
              for (int n = 0; n < d; ++n)
                s(cod.coord(lb, i, j), dom.coord(kb, m, n)) +=
                    k(h + i, m) * std::conj(k(h + j, n));
    }
  }
  return Channel(dom, cod, s);
}

PureMap random_pure(int rows, int cols, Rng& rng) { return PureMap{ginibre(rows, cols, rng)}; }

}  // namespace karoubi::quant
