#pragma once

#include <memory>
#include <vector>

#include "karoubi/theory.hpp"

namespace karoubi {

// -- free biproduct completion ------------------------------------------------
//
// Objects are finite lists of base objects (the empty list is the zero
// object); morphisms are matrices of base morphisms, composed by matrix
// multiplication over (compose, sum). entries[j][i] : A_i -> B_j.

struct BiprodObj : ObjData {
  std::vector<Obj> parts;
  explicit BiprodObj(std::vector<Obj> p) : parts(std::move(p)) {}
};

struct BiprodMor : MorData {
  std::vector<std::vector<Mor>> entries;  // [cod index][dom index]
  explicit BiprodMor(std::vector<std::vector<Mor>> e) : entries(std::move(e)) {}
};

class BiprodTheory final : public Theory {
 public:
  explicit BiprodTheory(std::shared_ptr<const Theory> base) : base_(std::move(base)) {}

  const std::shared_ptr<const Theory>& base() const { return base_; }

  Obj make_obj(std::vector<Obj> parts) const;
  Mor make_mor(const Obj& dom, const Obj& cod, std::vector<std::vector<Mor>> entries) const;

  Obj embed_obj(const Obj& base_obj) const;  // A -> <A>
  Mor embed_mor(const Mor& base_mor) const;

  Mor injection(const Obj& list, int i) const;   // kappa_i : <A_i> -> list
  Mor projection(const Obj& list, int i) const;  // pi_i : list -> <A_i>

  static const std::vector<Obj>& parts(const Obj& list);
  static const Mor& entry(const Mor& m, int codIndex, int domIndex);

  std::string name() const override;
  Obj unit() const override;
  bool obj_equal(const Obj& a, const Obj& b) const override;
  std::string obj_repr(const Obj& a) const override;
  Mor identity(const Obj& a) const override;
  Mor compose(const Mor& g, const Mor& f) const override;
  Mor sum(const Mor& f, const Mor& g) const override;
  Mor zero(const Obj& dom, const Obj& cod) const override;
  Mor scale(const Mor& s, const Mor& f) const override;
  Mor discard(const Obj& a) const override;
  double distance(const Mor& f, const Mor& g) const override;
  bool has_tensor() const override { return base_->has_tensor(); }
  Obj tensor_obj(const Obj& a, const Obj& b) const override;
  Mor tensor(const Mor& f, const Mor& g) const override;
  bool has_adjoint() const override { return base_->has_adjoint(); }
  Mor adjoint(const Mor& f) const override;
  bool additive_idempotent() const override { return base_->additive_idempotent(); }
  bool cancellative() const override { return base_->cancellative(); }

 private:
  std::shared_ptr<const Theory> base_;
};

std::shared_ptr<const BiprodTheory> biproduct_completion(std::shared_ptr<const Theory> base);

// -- Karoubi envelope -----------------------------------------------------------
//
// Objects are pairs (A, p) with p an idempotent on A; morphisms
// f : (A, p) -> (B, q) are base morphisms with f = q . f . p, enforced at
// construction. The identity on (A, p) is p itself, and discarding is
// discard(A) . p. With `causal_only`, object creation is restricted to
// causal idempotents (the physically meaningful subcategory).

struct KaroubiObj : ObjData {
  Obj base;
  Mor idem;
  bool causal = false;
  KaroubiObj(Obj b, Mor p, bool c) : base(std::move(b)), idem(std::move(p)), causal(c) {}
};

struct KaroubiMor : MorData {
  Mor f;
  explicit KaroubiMor(Mor f) : f(std::move(f)) {}
};

class KaroubiTheory final : public Theory {
 public:
  KaroubiTheory(std::shared_ptr<const Theory> base, bool causal_only)
      : base_(std::move(base)), causal_only_(causal_only) {}

  const std::shared_ptr<const Theory>& base() const { return base_; }
  bool causal_only() const { return causal_only_; }

  Obj make_obj(const Obj& base_obj, const Mor& idem, Tolerance tol = {}) const;
  Mor make_mor(const Obj& dom, const Obj& cod, const Mor& f, Tolerance tol = {}) const;

  Obj embed_obj(const Obj& base_obj) const;  // A -> (A, id)
  Mor embed_mor(const Mor& base_mor) const;

  static const Obj& base_of(const Obj& obj);
  static const Mor& idem_of(const Obj& obj);
  static bool causal_flag(const Obj& obj);
  static const Mor& payload(const Mor& m);

  std::string name() const override;
  Obj unit() const override;
  bool obj_equal(const Obj& a, const Obj& b) const override;
  std::string obj_repr(const Obj& a) const override;
  Mor identity(const Obj& a) const override;
  Mor compose(const Mor& g, const Mor& f) const override;
  Mor sum(const Mor& f, const Mor& g) const override;
  Mor zero(const Obj& dom, const Obj& cod) const override;
  Mor scale(const Mor& s, const Mor& f) const override;
  Mor discard(const Obj& a) const override;
  double distance(const Mor& f, const Mor& g) const override;
  bool has_tensor() const override { return base_->has_tensor(); }
  Obj tensor_obj(const Obj& a, const Obj& b) const override;
  Mor tensor(const Mor& f, const Mor& g) const override;
  bool additive_idempotent() const override { return base_->additive_idempotent(); }
  bool cancellative() const override { return base_->cancellative(); }

 private:
  std::shared_ptr<const Theory> base_;
  bool causal_only_;
};

std::shared_ptr<const KaroubiTheory> karoubi_envelope(std::shared_ptr<const Theory> base,
                                                      bool causal_only = false);

// -- comparing the completions ---------------------------------------------------

// A splitting p = m . e with e . m = id.
struct Splitting {
  Mor m;  // B -> A
  Mor e;  // A -> B
};

// p . q = q and q . p = p: the two idempotents have the same image, and
// (A, p) is isomorphic to (A, q) in the envelope.
bool karoubi_iso_check(const Mor& p, const Mor& q, Tolerance tol = {});

// Given a splitting (m, e) of q and an idempotent p with p.q = q, q.p = p,
// produces the splitting (m, e . p) of p, verifying both identities.
Splitting splitting_transfer(const Splitting& q_split, const Mor& p, Tolerance tol = {});

// Biproduct of Karoubi objects (A_i, p_i) over a disjoint embedding of the
// A_i: the object is (A, q) with q = sum kappa_i . p_i . pi_i, injections
// kappa_i . p_i and projections p_i . pi_i.
struct KaroubiBiproduct {
  Obj object;
  std::vector<Mor> injections;
  std::vector<Mor> projections;
};
KaroubiBiproduct karoubi_biproduct(const std::shared_ptr<const KaroubiTheory>& split,
                                   const std::vector<Obj>& objs, const DisjointEmbedding& emb,
                                   Tolerance tol = {});

// The comparison functor F from the biproduct completion into the envelope:
// <A_1..A_n> becomes (A, pinch) over a disjoint embedding, and a matrix M
// becomes sum_{j,i} kappa_j . M_ji . pi_i. `functor_f_preimage` reconstructs
// the matrix back from any envelope morphism between embedded objects
// (fullness of F).
Obj functor_f_obj(const std::shared_ptr<const KaroubiTheory>& split,
                  const DisjointEmbedding& emb, Tolerance tol = {});
Mor functor_f_mor(const std::shared_ptr<const KaroubiTheory>& split, const Mor& biprod_mor,
                  const DisjointEmbedding& emb_dom, const DisjointEmbedding& emb_cod,
                  Tolerance tol = {});
Mor functor_f_preimage(const std::shared_ptr<const BiprodTheory>& biprod, const Mor& split_mor,
                       const DisjointEmbedding& emb_dom, const DisjointEmbedding& emb_cod);

// -- repairing sub-causal idempotents ---------------------------------------------

// A state a with discard . p . a = 1, built as p(u) rescaled for the
// theory's canonical causal state u. Exists for every non-zero sub-causal
// idempotent in a positive theory.
Mor causalize_witness_state(const Mor& p, Tolerance tol = {});

// For a non-zero sub-causal idempotent p and a state a as above, forms the
// causal idempotent q = p + p . a . x where x completes discard . p to
// discard. Satisfies p . q = q and q . p = p, so a splitting of q transfers
// to one of p. Requires a cancellative theory.
Mor causalize_subcausal(const Mor& p, const Mor& a, Tolerance tol = {});

}  // namespace karoubi
