#pragma once

#include <memory>
#include <string>
#include <vector>

#include "karoubi/common.hpp"
#include "karoubi/rng.hpp"

namespace karoubi {

class Theory;

struct ObjData {
  virtual ~ObjData() = default;
};

struct MorData {
  virtual ~MorData() = default;
};

// Value handle for an object of some theory. Payloads are immutable and
// shared; copying a handle is cheap.
class Obj {
 public:
  Obj() = default;
  Obj(std::shared_ptr<const Theory> theory, std::shared_ptr<const ObjData> data)
      : theory_(std::move(theory)), data_(std::move(data)) {}

  bool valid() const { return static_cast<bool>(data_); }
  const Theory& theory() const { return *theory_; }
  std::shared_ptr<const Theory> theory_ptr() const { return theory_; }

  template <class T>
  const T& as() const {
    const T* p = dynamic_cast<const T*>(data_.get());
    if (!p) fail("MismatchedTheory", "object payload has unexpected type");
    return *p;
  }

 private:
  std::shared_ptr<const Theory> theory_;
  std::shared_ptr<const ObjData> data_;
};

// Value handle for a morphism dom -> cod.
class Mor {
 public:
  Mor() = default;
  Mor(Obj dom, Obj cod, std::shared_ptr<const MorData> data)
      : dom_(std::move(dom)), cod_(std::move(cod)), data_(std::move(data)) {}

  bool valid() const { return static_cast<bool>(data_); }
  const Obj& dom() const { return dom_; }
  const Obj& cod() const { return cod_; }
  const Theory& theory() const { return dom_.theory(); }
  std::shared_ptr<const Theory> theory_ptr() const { return dom_.theory_ptr(); }

  template <class T>
  const T& as() const {
    const T* p = dynamic_cast<const T*>(data_.get());
    if (!p) fail("MismatchedTheory", "morphism payload has unexpected type");
    return *p;
  }

 private:
  Obj dom_, cod_;
  std::shared_ptr<const MorData> data_;
};

// Injections and projections of a common target object satisfying the
// orthogonality half of the biproduct equations: pi_i . kappa_j = delta_ij.
// `pinch` is the idempotent sum_i kappa_i . pi_i; it equals the identity
// exactly when the embedding is a biproduct.
struct DisjointEmbedding {
  Obj target;
  std::vector<Mor> injections;
  std::vector<Mor> projections;
  Mor pinch;
};

// A theory: objects, morphisms, sequential composition, commutative-monoid
// sum on homsets, discarding, and optional tensor / adjoint structure.
// Concrete instances are the boolean and nonnegative-real matrix theories,
// the quantum channel theory, and the completions built on top of them.
// All operations are pure; instances are safe to share across threads.
class Theory : public std::enable_shared_from_this<Theory> {
 public:
  virtual ~Theory() = default;

  virtual std::string name() const = 0;

  // -- objects -------------------------------------------------------------
  virtual Obj unit() const = 0;
  virtual bool obj_equal(const Obj& a, const Obj& b) const = 0;
  virtual std::string obj_repr(const Obj& a) const = 0;

  // -- required structure ----------------------------------------------------
  virtual Mor identity(const Obj& a) const = 0;
  virtual Mor compose(const Mor& g, const Mor& f) const = 0;  // g after f
  virtual Mor sum(const Mor& f, const Mor& g) const = 0;
  virtual Mor zero(const Obj& dom, const Obj& cod) const = 0;
  virtual Mor scale(const Mor& s, const Mor& f) const = 0;  // s : I -> I
  virtual Mor discard(const Obj& a) const = 0;

  // Entrywise max-norm distance between payloads of parallel morphisms.
  virtual double distance(const Mor& f, const Mor& g) const = 0;
  bool approx_eq(const Mor& f, const Mor& g, Tolerance tol = {}) const {
    return distance(f, g) <= tol.eps;
  }

  // -- optional structure ----------------------------------------------------
  virtual bool has_tensor() const { return false; }
  virtual Obj tensor_obj(const Obj&, const Obj&) const;
  virtual Mor tensor(const Mor&, const Mor&) const;
  virtual bool has_adjoint() const { return false; }
  virtual Mor adjoint(const Mor&) const;

  // -- traits ----------------------------------------------------------------
  // Boolean theories: f + f = f.
  virtual bool additive_idempotent() const { return false; }
  // f + g = f + h implies g = h; enables partial subtraction.
  virtual bool cancellative() const { return false; }

  // -- per-theory decision procedures and samplers ---------------------------
  virtual bool subcausal(const Mor& f, Tolerance tol) const;
  virtual Mor difference(const Mor& f, const Mor& g) const;  // f - g
  virtual Mor uniform_causal_state(const Obj& a) const;      // canonical causal state
  virtual Mor inv_scalar(const Mor& s) const;                // inverse of s : I -> I
  virtual Mor scalar(double v) const;                        // the scalar v : I -> I
  virtual Obj random_object(Rng& rng, int size_cap) const;
  virtual Mor random_morphism(const Obj& dom, const Obj& cod, Rng& rng) const;
  virtual Mor random_causal(const Obj& dom, const Obj& cod, Rng& rng) const;
  virtual DisjointEmbedding disjoint_embedding(const std::vector<Obj>& parts) const;

 protected:
  void require_parallel(const Mor& f, const Mor& g) const;
  void require_composable(const Mor& g, const Mor& f) const;
};

// -- theory-independent predicates -------------------------------------------

// discard(cod) . f = discard(dom).
bool is_causal(const Mor& f, Tolerance tol = {});

// p . p = p (endomorphisms only).
bool is_idempotent(const Mor& p, Tolerance tol = {});

// Some effect x completes discard . f to discard; decided per theory.
bool is_subcausal(const Mor& f, Tolerance tol = {});

}  // namespace karoubi
