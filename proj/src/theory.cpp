#include "karoubi/theory.hpp"

namespace karoubi {

Obj Theory::tensor_obj(const Obj&, const Obj&) const {
  fail("Unsupported", name() + " has no tensor structure");
}

Mor Theory::tensor(const Mor&, const Mor&) const {
  fail("Unsupported", name() + " has no tensor structure");
}

Mor Theory::adjoint(const Mor&) const {
  fail("Unsupported", name() + " has no adjoint");
}

bool Theory::subcausal(const Mor&, Tolerance) const {
  fail("Unsupported", name() + " has no sub-causality decision rule");
}

Mor Theory::difference(const Mor&, const Mor&) const {
  fail("Unsupported", name() + " has no (partial) subtraction");
}

Mor Theory::uniform_causal_state(const Obj&) const {
  fail("Unsupported", name() + " has no canonical causal state");
}

Mor Theory::inv_scalar(const Mor&) const {
  fail("Unsupported", name() + " has no scalar inversion");
}

Mor Theory::scalar(double) const {
  fail("Unsupported", name() + " has no numeric scalars");
}

Obj Theory::random_object(Rng&, int) const {
  fail("Unsupported", name() + " has no object sampler");
}

Mor Theory::random_morphism(const Obj&, const Obj&, Rng&) const {
  fail("Unsupported", name() + " has no morphism sampler");
}

Mor Theory::random_causal(const Obj&, const Obj&, Rng&) const {
  fail("Unsupported", name() + " has no causal morphism sampler");
}

DisjointEmbedding Theory::disjoint_embedding(const std::vector<Obj>&) const {
  fail("Unsupported", name() + " has no disjoint embeddings");
}

void Theory::require_parallel(const Mor& f, const Mor& g) const {
  if (!obj_equal(f.dom(), g.dom()) || !obj_equal(f.cod(), g.cod()))
    fail("ShapeMismatch", "morphisms are not parallel");
}

void Theory::require_composable(const Mor& g, const Mor& f) const {
  if (!obj_equal(f.cod(), g.dom()))
    fail("ShapeMismatch", "cod of inner morphism differs from dom of outer");
}

bool is_causal(const Mor& f, Tolerance tol) {
  const Theory& t = f.theory();
  Mor lhs = t.compose(t.discard(f.cod()), f);
  return t.approx_eq(lhs, t.discard(f.dom()), tol);
}

bool is_idempotent(const Mor& p, Tolerance tol) {
  const Theory& t = p.theory();
  if (!t.obj_equal(p.dom(), p.cod()))
    fail("NotEndomorphism", "idempotency is only defined for endomorphisms");
  return t.approx_eq(t.compose(p, p), p, tol);
}

bool is_subcausal(const Mor& f, Tolerance tol) { return f.theory().subcausal(f, tol); }

}  // namespace karoubi
