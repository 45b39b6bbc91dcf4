#include "karoubi/mat.hpp"

#include <algorithm>
#include <cmath>

namespace karoubi::mat {

BoolMatrix BoolMatrix::identity(int n) {
  BoolMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BoolMatrix BoolMatrix::ones(int rows, int cols) {
  BoolMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.set(i, j, true);
  return m;
}

BoolMatrix BoolMatrix::matmul(const BoolMatrix& rhs) const {
  if (cols_ != rhs.rows_) fail("ShapeMismatch", "boolean matrix product shape mismatch");
  BoolMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      if (!(*this)(i, k)) continue;
      for (int j = 0; j < rhs.cols_; ++j)
        if (rhs(k, j)) out.set(i, j, true);
    }
  return out;
}

BoolMatrix BoolMatrix::entrywise_or(const BoolMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) fail("ShapeMismatch", "boolean matrix sum shape mismatch");
  BoolMatrix out(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(i, j, (*this)(i, j) || rhs(i, j));
  return out;
}

BoolMatrix BoolMatrix::kron(const BoolMatrix& rhs) const {
  BoolMatrix out(rows_ * rhs.rows_, cols_ * rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      if (!(*this)(i, j)) continue;
      for (int k = 0; k < rhs.rows_; ++k)
        for (int l = 0; l < rhs.cols_; ++l)
          if (rhs(k, l)) out.set(i * rhs.rows_ + k, j * rhs.cols_ + l, true);
    }
  return out;
}

BoolMatrix BoolMatrix::transpose() const {
  BoolMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(j, i, (*this)(i, j));
  return out;
}

bool BoolMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](std::uint8_t v) { return v == 0; });
}

namespace {

// Shared scaffolding for the two matrix theories; the Traits type carries
// everything that differs between the boolean and nonnegative-real semirings.
template <class Traits>
class MatTheory final : public Theory {
 public:
  using Matrix = typename Traits::Matrix;

  std::string name() const override { return Traits::name(); }

  Obj make_obj(int n) const {
    if (n < 0) fail("ShapeMismatch", "object dimension must be nonnegative");
    return Obj(shared_from_this(), std::make_shared<MatObj>(n));
  }

  Mor make_mor(const Matrix& m) const {
    Matrix cleaned = m;
    Traits::validate(cleaned);
    Obj dom = make_obj(Traits::cols(cleaned));
    Obj cod = make_obj(Traits::rows(cleaned));
    return Mor(dom, cod, std::make_shared<typename Traits::MorType>(std::move(cleaned)));
  }

  static const Matrix& payload(const Mor& f) { return f.template as<typename Traits::MorType>().m; }

  Obj unit() const override { return make_obj(1); }

  bool obj_equal(const Obj& a, const Obj& b) const override {
    return a.as<MatObj>().n == b.as<MatObj>().n;
  }

  std::string obj_repr(const Obj& a) const override { return std::to_string(a.as<MatObj>().n); }

  Mor identity(const Obj& a) const override { return make_mor(Traits::identity(a.as<MatObj>().n)); }

  Mor compose(const Mor& g, const Mor& f) const override {
    require_composable(g, f);
    return make_mor(Traits::matmul(payload(g), payload(f)));
  }

  Mor sum(const Mor& f, const Mor& g) const override {
    require_parallel(f, g);
    return make_mor(Traits::add(payload(f), payload(g)));
  }

  Mor zero(const Obj& dom, const Obj& cod) const override {
    return make_mor(Traits::zeros(cod.as<MatObj>().n, dom.as<MatObj>().n));
  }

  Mor scale(const Mor& s, const Mor& f) const override {
    if (Traits::rows(payload(s)) != 1 || Traits::cols(payload(s)) != 1)
      fail("ShapeMismatch", "scalar must be a morphism I -> I");
    return make_mor(Traits::scale(payload(s), payload(f)));
  }

  Mor discard(const Obj& a) const override { return make_mor(Traits::ones_row(a.as<MatObj>().n)); }

  double distance(const Mor& f, const Mor& g) const override {
    require_parallel(f, g);
    return Traits::distance(payload(f), payload(g));
  }

  bool has_tensor() const override { return true; }

  Obj tensor_obj(const Obj& a, const Obj& b) const override {
    return make_obj(a.as<MatObj>().n * b.as<MatObj>().n);
  }

  Mor tensor(const Mor& f, const Mor& g) const override {
    return make_mor(Traits::kron(payload(f), payload(g)));
  }

  bool has_adjoint() const override { return true; }

  Mor adjoint(const Mor& f) const override { return make_mor(Traits::transpose(payload(f))); }

  bool additive_idempotent() const override { return Traits::idempotent_add; }
  bool cancellative() const override { return Traits::cancellative; }

  bool subcausal(const Mor& f, Tolerance tol) const override {
    return Traits::subcausal(payload(f), tol);
  }

  Mor difference(const Mor& f, const Mor& g) const override {
    require_parallel(f, g);
    return make_mor(Traits::difference(payload(f), payload(g)));
  }

  Mor uniform_causal_state(const Obj& a) const override {
    const int n = a.as<MatObj>().n;
    if (n == 0) fail("Unsupported", "the empty object has no states");
    return make_mor(Traits::uniform_state(n));
  }

  Mor inv_scalar(const Mor& s) const override {
    if (Traits::rows(payload(s)) != 1 || Traits::cols(payload(s)) != 1)
      fail("ShapeMismatch", "scalar must be a morphism I -> I");
    return make_mor(Traits::inv_scalar(payload(s)));
  }

  Mor scalar(double v) const override { return make_mor(Traits::scalar_value(v)); }

  Obj random_object(Rng& rng, int size_cap) const override {
    return make_obj(rng.uniform_int(1, std::max(1, size_cap)));
  }

  Mor random_morphism(const Obj& dom, const Obj& cod, Rng& rng) const override {
    return make_mor(Traits::random(rng, cod.as<MatObj>().n, dom.as<MatObj>().n));
  }

  Mor random_causal(const Obj& dom, const Obj& cod, Rng& rng) const override {
    const int n = dom.as<MatObj>().n, m = cod.as<MatObj>().n;
    if (m == 0 && n > 0) fail("Unsupported", "no causal morphisms into the empty object");
    return make_mor(Traits::random_causal(rng, m, n));
  }

  DisjointEmbedding disjoint_embedding(const std::vector<Obj>& parts) const override {
    int total = 0;
    for (const Obj& p : parts) total += p.as<MatObj>().n;
    DisjointEmbedding emb;
    emb.target = make_obj(total);
    int offset = 0;
    for (const Obj& p : parts) {
      const int d = p.as<MatObj>().n;
      Matrix inc = Traits::zeros(total, d);
      for (int i = 0; i < d; ++i) Traits::set_one(inc, offset + i, i);
      Mor kappa = make_mor(inc);
      emb.injections.push_back(kappa);
      emb.projections.push_back(adjoint(kappa));
      offset += d;
    }
    emb.pinch = zero(emb.target, emb.target);
    for (size_t i = 0; i < parts.size(); ++i)
      emb.pinch = sum(emb.pinch, compose(emb.injections[i], emb.projections[i]));
    return emb;
  }
};

struct BoolTraits {
  using Matrix = BoolMatrix;
  using MorType = BoolMor;
  static constexpr bool idempotent_add = true;
  static constexpr bool cancellative = false;

  static std::string name() { return "FRel"; }
  static int rows(const Matrix& m) { return m.rows(); }
  static int cols(const Matrix& m) { return m.cols(); }
  static void validate(Matrix&) {}
  static Matrix identity(int n) { return BoolMatrix::identity(n); }
  static Matrix zeros(int r, int c) { return BoolMatrix(r, c); }
  static Matrix ones_row(int n) { return BoolMatrix::ones(1, n); }
  static Matrix matmul(const Matrix& a, const Matrix& b) { return a.matmul(b); }
  static Matrix add(const Matrix& a, const Matrix& b) { return a.entrywise_or(b); }
  static Matrix kron(const Matrix& a, const Matrix& b) { return a.kron(b); }
  static Matrix transpose(const Matrix& a) { return a.transpose(); }
  static void set_one(Matrix& m, int i, int j) { m.set(i, j, true); }

  static Matrix scale(const Matrix& s, const Matrix& f) {
    return s(0, 0) ? f : BoolMatrix(f.rows(), f.cols());
  }

  static double distance(const Matrix& a, const Matrix& b) { return a == b ? 0.0 : 1.0; }

  static bool subcausal(const Matrix&, Tolerance) { return true; }  // x := discard always works

  static Matrix difference(const Matrix&, const Matrix&) {
    fail("Unsupported", "boolean addition is not cancellative");
  }

  static Matrix uniform_state(int n) { return BoolMatrix::ones(n, 1); }

  static Matrix scalar_value(double v) {
    Matrix s(1, 1);
    s.set(0, 0, v != 0.0);
    return s;
  }

  static Matrix inv_scalar(const Matrix& s) {
    if (!s(0, 0)) fail("Unsupported", "the zero scalar has no inverse");
    return s;
  }

  static Matrix random(Rng& rng, int r, int c) {
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.set(i, j, rng.bit());
    return m;
  }

  static Matrix random_causal(Rng& rng, int r, int c) {
    Matrix m = random(rng, r, c);
    for (int j = 0; j < c; ++j) {
      bool any = false;
      for (int i = 0; i < r; ++i) any = any || m(i, j);
      if (!any) m.set(rng.uniform_int(0, r - 1), j, true);
    }
    return m;
  }
};

struct RealTraits {
  using Matrix = RMat;
  using MorType = RealMor;
  static constexpr bool idempotent_add = false;
  static constexpr bool cancellative = true;

  static std::string name() { return "Class"; }
  static int rows(const Matrix& m) { return int(m.rows()); }
  static int cols(const Matrix& m) { return int(m.cols()); }

  static void validate(Matrix& m) {
    if (m.size() > 0 && m.minCoeff() < -1e-12)
      fail("ShapeMismatch", "nonnegative-real matrix has negative entries");
    m = m.cwiseMax(0.0);
  }

  static Matrix identity(int n) { return RMat::Identity(n, n); }
  static Matrix zeros(int r, int c) { return RMat::Zero(r, c); }
  static Matrix ones_row(int n) { return RMat::Ones(1, n); }
  static Matrix matmul(const Matrix& a, const Matrix& b) { return a * b; }
  static Matrix add(const Matrix& a, const Matrix& b) { return a + b; }
  static Matrix transpose(const Matrix& a) { return a.transpose(); }
  static void set_one(Matrix& m, int i, int j) { m(i, j) = 1.0; }
  static Matrix scale(const Matrix& s, const Matrix& f) { return s(0, 0) * f; }

  static Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  }

  static double distance(const Matrix& a, const Matrix& b) {
    return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
  }

  static bool subcausal(const Matrix& m, Tolerance tol) {
    for (int j = 0; j < m.cols(); ++j)
      if (m.col(j).sum() > 1.0 + tol.eps) return false;
    return true;
  }

  static Matrix difference(const Matrix& a, const Matrix& b) {
    Matrix d = a - b;
    if (d.size() > 0 && d.minCoeff() < -1e-7)
      fail("Unsupported", "difference leaves the nonnegative cone");
    return d.cwiseMax(0.0);
  }

  static Matrix uniform_state(int n) { return Matrix::Constant(n, 1, 1.0 / n); }

  static Matrix scalar_value(double v) { return Matrix::Constant(1, 1, v); }

  static Matrix inv_scalar(const Matrix& s) {
    if (std::abs(s(0, 0)) < 1e-300) fail("Unsupported", "scalar too small to invert");
    return Matrix::Constant(1, 1, 1.0 / s(0, 0));
  }

  static Matrix random(Rng& rng, int r, int c) {
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = rng.uniform();
    return m;
  }

  static Matrix random_causal(Rng& rng, int r, int c) {
    Matrix m = random(rng, r, c);
    for (int j = 0; j < c; ++j) {
      double s = m.col(j).sum();
      if (s <= 0.0) {
        m(rng.uniform_int(0, r - 1), j) = 1.0;
        s = 1.0;
      }
      m.col(j) /= s;
    }
    return m;
  }
};

using BoolTheory = MatTheory<BoolTraits>;
using RealTheory = MatTheory<RealTraits>;

}  // namespace

std::shared_ptr<const Theory> frel_theory() {
  static const std::shared_ptr<const Theory> instance = std::make_shared<BoolTheory>();
  return instance;
}

std::shared_ptr<const Theory> class_theory() {
  static const std::shared_ptr<const Theory> instance = std::make_shared<RealTheory>();
  return instance;
}

std::shared_ptr<const Theory> instantiate_mat_theory(const SemiringSpec& spec) {
  return spec.kind == SemiringKind::Boolean ? frel_theory() : class_theory();
}

Obj mat_obj(const std::shared_ptr<const Theory>& theory, int n) {
  if (auto t = std::dynamic_pointer_cast<const BoolTheory>(theory)) return t->make_obj(n);
  if (auto t = std::dynamic_pointer_cast<const RealTheory>(theory)) return t->make_obj(n);
  fail("MismatchedTheory", "not a matrix theory");
}

Mor bool_mor(const std::shared_ptr<const Theory>& theory, const BoolMatrix& m) {
  auto t = std::dynamic_pointer_cast<const BoolTheory>(theory);
  if (!t) fail("MismatchedTheory", "not the boolean matrix theory");
  return t->make_mor(m);
}

Mor real_mor(const std::shared_ptr<const Theory>& theory, const RMat& m) {
  auto t = std::dynamic_pointer_cast<const RealTheory>(theory);
  if (!t) fail("MismatchedTheory", "not the nonnegative-real matrix theory");
  return t->make_mor(m);
}

const BoolMatrix& bool_payload(const Mor& f) { return f.as<BoolMor>().m; }
const RMat& real_payload(const Mor& f) { return f.as<RealMor>().m; }

std::optional<DistinguishablePair> perfectly_distinguishable_pair(
    const std::shared_ptr<const Theory>& theory, int n) {
  if (n <= 1) return std::nullopt;
  DistinguishablePair pair;
  if (std::dynamic_pointer_cast<const BoolTheory>(theory)) {
    BoolMatrix a0(n, 1), a1(n, 1);
    a0.set(0, 0, true);
    a1.set(1, 0, true);
    // e0 absorbs the remaining discard mass so that e0 + e1 = discard.
    BoolMatrix e0(1, n), e1(1, n);
    e0.set(0, 0, true);
    for (int j = 2; j < n; ++j) e0.set(0, j, true);
    e1.set(0, 1, true);
    pair.a0 = bool_mor(theory, a0);
    pair.a1 = bool_mor(theory, a1);
    pair.e0 = bool_mor(theory, e0);
    pair.e1 = bool_mor(theory, e1);
    return pair;
  }
  RMat a0 = RMat::Zero(n, 1), a1 = RMat::Zero(n, 1);
  a0(0, 0) = 1.0;
  a1(1, 0) = 1.0;
  RMat e0 = RMat::Zero(1, n), e1 = RMat::Zero(1, n);
  e0(0, 0) = 1.0;
  for (int j = 2; j < n; ++j) e0(0, j) = 1.0;
  e1(0, 1) = 1.0;
  pair.a0 = real_mor(theory, a0);
  pair.a1 = real_mor(theory, a1);
  pair.e0 = real_mor(theory, e0);
  pair.e1 = real_mor(theory, e1);
  return pair;
}

Mor counterexample_idempotent(const Mor& a0, const Mor& a1, const Mor& e1) {
  auto theory = a0.theory_ptr();
  if (!theory->additive_idempotent())
    fail("NotPossibilistic", "counterexample construction needs idempotent addition");
  const Theory& t = *theory;
  Mor one = t.identity(t.unit());
  if (!t.approx_eq(t.compose(e1, a1), one, Tolerance{0.0}) ||
      !t.approx_eq(t.compose(e1, a0), t.zero(t.unit(), t.unit()), Tolerance{0.0}))
    fail("ShapeMismatch", "effect does not perfectly distinguish the states");
  Mor p = t.sum(t.compose(a0, t.discard(a0.cod())), t.compose(a1, e1));
  return p;
}

}  // namespace karoubi::mat
