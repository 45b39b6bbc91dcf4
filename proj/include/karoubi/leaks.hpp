#pragma once

#include <memory>

#include "karoubi/quant.hpp"
#include "karoubi/theory.hpp"

namespace karoubi::leaks {

// A candidate leak: a morphism l : A -> A (x) L. It is a genuine leak when
// discarding the environment leg gives back the identity on A.
struct LeakCandidate {
  Mor l;
  Obj system;
  Obj env;
};

// (id_A (x) discard_L) . l = id_A.
bool is_leak(const LeakCandidate& lc, Tolerance tol = {});

// The process left on A after the leakage: iota = (id (x) discard) . l.
// Throws NotIdempotent when the result fails iota . iota = iota, since only
// idempotent leakage induces a well-formed restricted theory.
Mor idempotent_from_leakage(const LeakCandidate& lc, Tolerance tol = {});

// The trivial leak of an idempotent: l = p viewed as A -> A (x) I. Round
// trips exactly through idempotent_from_leakage.
LeakCandidate leak_from_idempotent_trivial(const Mor& p, Tolerance tol = {});

// A purified leak for a causal idempotent channel: Kraus operators from the
// Choi eigendecomposition assemble into an isometry V = sum_i K_i (x) |i>,
// and l = V . V^dag as a channel A -> A (x) L with L of dimension the Choi
// rank. Discarding the environment recovers p.
LeakCandidate stinespring_leak(const quant::Channel& p, Tolerance tol = {});

// The copy map x -> (x, x) as a leak n -> n (x) n with discarding as both
// counits. Defined for the two classical matrix theories; quantum systems
// only admit constant leaks, so it is refused there.
LeakCandidate broadcasting_map(const std::shared_ptr<const Theory>& theory, int n);

// Checks discarding as a *left* counit: (discard (x) id) . l = id.
bool has_left_counit(const LeakCandidate& lc, Tolerance tol = {});

// Whether chosen leaks respect the tensor: iota_{A(x)B} = iota_A (x) iota_B.
bool leak_tensor_compatible(const LeakCandidate& la, const LeakCandidate& lb,
                            const LeakCandidate& lab, Tolerance tol = {});

// -- Frobenius fragment ---------------------------------------------------------

// A comultiplication delta : C^d -> C^d (x) C^d at the pure level.
struct FrobeniusStructure {
  int dim = 0;
  CMat delta;  // d^2 x d
};

struct FrobeniusReport {
  double coassoc_residual = 0.0;
  double frobenius_residual = 0.0;
  double special_residual = 0.0;
  bool coassoc = false;
  bool frobenius_law = false;  // (id (x) delta^dag) (delta (x) id) = (delta^dag (x) id) (id (x) delta)
  bool special = false;        // delta^dag delta = id
};

FrobeniusReport verify_frobenius(const FrobeniusStructure& fs, Tolerance tol = {});

// The decoherence channel X -> Tr_1(delta X delta^dag): causal by
// speciality, idempotent and self-adjoint for dagger special Frobenius
// structures. Refuses non-special comultiplications.
quant::Channel decoherence_idempotent(const FrobeniusStructure& fs, Tolerance tol = {});

// delta|i> = |ii>: the copy comultiplication (commutative C*-algebra C^d).
FrobeniusStructure copy_delta(int d);

// The normalised pair-of-pants on M_n (carried by C^{n^2}): delta = mu^dag / sqrt(n)
// for the matrix multiplication mu.
FrobeniusStructure pants_delta(int n);

}  // namespace karoubi::leaks
