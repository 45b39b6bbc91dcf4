#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "karoubi/theory.hpp"

namespace karoubi::mat {

// Dense exact 0/1 matrix over the boolean semiring (or = +, and = *).
class BoolMatrix {
 public:
  BoolMatrix() : rows_(0), cols_(0) {}
  BoolMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, 0) {}

  static BoolMatrix identity(int n);
  static BoolMatrix ones(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::uint8_t operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }
  void set(int i, int j, bool v) { a_[size_t(i) * cols_ + j] = v ? 1 : 0; }

  BoolMatrix matmul(const BoolMatrix& rhs) const;  // boolean product
  BoolMatrix entrywise_or(const BoolMatrix& rhs) const;
  BoolMatrix kron(const BoolMatrix& rhs) const;
  BoolMatrix transpose() const;
  bool operator==(const BoolMatrix& rhs) const { return rows_ == rhs.rows_ && cols_ == rhs.cols_ && a_ == rhs.a_; }
  bool is_zero() const;

 private:
  int rows_, cols_;
  std::vector<std::uint8_t> a_;
};

struct MatObj : ObjData {
  int n;
  explicit MatObj(int n) : n(n) {}
};

struct BoolMor : MorData {
  BoolMatrix m;
  explicit BoolMor(BoolMatrix m) : m(std::move(m)) {}
};

struct RealMor : MorData {
  RMat m;
  explicit RealMor(RMat m) : m(std::move(m)) {}
};

enum class SemiringKind { Boolean, NonnegReal };

struct SemiringSpec {
  SemiringKind kind = SemiringKind::NonnegReal;
};

// Matrix theory over a semiring: objects are naturals, composition is the
// matrix product, tensor the Kronecker product, discarding the all-ones row.
// The two instances are FRel (boolean, possibilistic) and Class (nonnegative
// reals, probabilistic).
std::shared_ptr<const Theory> instantiate_mat_theory(const SemiringSpec& spec);
std::shared_ptr<const Theory> frel_theory();
std::shared_ptr<const Theory> class_theory();

// -- helpers for building and reading matrix morphisms -----------------------

Obj mat_obj(const std::shared_ptr<const Theory>& theory, int n);
Mor bool_mor(const std::shared_ptr<const Theory>& theory, const BoolMatrix& m);
Mor real_mor(const std::shared_ptr<const Theory>& theory, const RMat& m);
const BoolMatrix& bool_payload(const Mor& f);
const RMat& real_payload(const Mor& f);

// -- possibilistic counterexample machinery -----------------------------------

struct DistinguishablePair {
  Mor a0, a1;    // states I -> n
  Mor e0, e1;    // effects n -> I with e_i . a_j = delta_ij, e0 + e1 = discard
};

// For n >= 2 returns a perfectly distinguishable pair of states with the
// witnessing effects; none for n <= 1.
std::optional<DistinguishablePair> perfectly_distinguishable_pair(
    const std::shared_ptr<const Theory>& theory, int n);

// p = a0 . discard + a1 . e1, a causal idempotent that cannot split in a
// possibilistic theory. Requires idempotent addition.
Mor counterexample_idempotent(const Mor& a0, const Mor& a1, const Mor& e1);

}  // namespace karoubi::mat
