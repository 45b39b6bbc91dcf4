#pragma once

#include <optional>
#include <string>
#include <vector>

#include "karoubi/mat.hpp"
#include "karoubi/quant.hpp"

namespace karoubi::decompose {

// Orthonormal (Hilbert-Schmidt) basis of the fixed-point space
// { X : c(X) = X } of an endomorphic single-block channel, computed from the
// near-null space of (superop - id). The returned basis is Hermitian, which
// is possible because channels preserve Hermiticity.
std::vector<CMat> fixed_point_space(const quant::Channel& c, Tolerance tol = {});

// One A_k (x) B_k factor of a split idempotent: the channel restricted to
// the block acts as M -> M (x) tau on a dim_a (x) dim_b corner of the space.
struct Block {
  int dim_a = 0;       // matrix algebra factor
  int dim_b = 0;       // support of tau
  int tau_rank = 0;    // rank of tau (= dim_b with the canonical support choice)
  CMat tau;            // dim_b x dim_b, PSD, trace 1
  quant::Channel m;    // [dim_a] -> [D], causal;  M -> M (x) tau embedded
  quant::Channel e;    // [D] -> [dim_a];          e . m = id
};

// The block structure of a CPTP idempotent p on B(C^D):
// H splits as a direct sum of A_k (x) B_k factors plus a residual subspace
// on which every fixed point vanishes. q = sum_k m_k . e_k is the canonical
// idempotent with the same image as p (p.q = q, q.p = p), and
// (split_m, split_e . p) is a splitting of p over the direct-sum system
// [a_1, ..., a_K].
struct BlockDecomposition {
  std::vector<Block> blocks;
  CMat basis;               // D x D unitary aligning H with the block factors
  int residual_dim = 0;     // dim of the subspace outside all A_k (x) B_k
  quant::Channel q;         // sum_k m_k . e_k
  quant::Channel split_m;   // [a_1..a_K] -> [D]
  quant::Channel split_e;   // [D] -> [a_1..a_K],  split_e . split_m = id
};

// Splits a CPTP idempotent into its C*-algebra block structure. The route:
// the adjoint p^dag is a unital CP idempotent, its fixed space S is a
// C*-algebra under the modified product x*y = p^dag(xy); splitting S into
// matrix-algebra blocks via its centre and matrix units yields dual bases
// from which the splitting channels are assembled. Every postcondition is
// verified numerically; on residuals above 10*tol the search retries with a
// fresh random seed before giving up.
BlockDecomposition decompose_cptp_idempotent(const quant::Channel& p, Tolerance tol = {});

struct CheckResult {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

struct DecompositionReport {
  std::vector<CheckResult> checks;
  double max_residual = 0.0;
  bool pass = false;
};

// Re-verifies a decomposition against the idempotent it claims to split:
// e_k . m_k = id, m_k causal, cross-block orthogonality, q idempotent,
// p . q = q, q . p = p, and the validity of the transferred splitting of p.
DecompositionReport verify_decomposition(const quant::Channel& p, const BlockDecomposition& dec,
                                         Tolerance tol = {});

// Planted-instance generator: p(X) = U [ sum_k Tr_{B_k}(P_k X' P_k) (x) tau_k ] U^dag
// with X' = U^dag X U, a Haar-random U and random full-rank tau_k. CPTP and
// idempotent by construction; the planted decomposition is returned with it.
std::pair<quant::Channel, BlockDecomposition> random_idempotent_instance(
    const std::vector<std::pair<int, int>>& spec, std::uint64_t seed);

// -- nonnegative idempotent matrices ------------------------------------------

// Rank-one pieces of a nonnegative idempotent: P = sum_i u_i v_i with
// u_i >= 0, v_i >= 0 and v_i u_j = delta_ij.
struct FlorDecomposition {
  std::vector<std::pair<RVec, RVec>> pairs;  // (column u_i, row v_i)
};

FlorDecomposition flor_decompose(const RMat& p, Tolerance tol = {});

// -- boolean splittings ---------------------------------------------------------

struct BoolSplitting {
  mat::BoolMatrix m;  // n x b
  mat::BoolMatrix e;  // b x n
};

// Exhaustive search for a boolean splitting p = m . e with e . m = id_b,
// b = 0..b_max, in deterministic order (b ascending, then lexicographic in
// the packed row-major bits, m outer). Sound and complete up to b_max.
std::optional<BoolSplitting> search_splitting_bool(const mat::BoolMatrix& p, int b_max);

}  // namespace karoubi::decompose
