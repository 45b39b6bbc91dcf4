#pragma once

#include <memory>
#include <vector>

#include "karoubi/theory.hpp"

namespace karoubi::quant {

// A finite-dimensional system: a direct sum of complex matrix algebras
// M_{d_1} + ... + M_{d_k}. A single entry is an ordinary quantum system
// B(C^d); several entries give the C*-algebra objects of the direct-sum
// extension. Operators on the system are block-diagonal D x D matrices
// (D = sum d_k); their coordinate vector stacks the blocks in order,
// row-major within each block, for a total of n = sum d_k^2 coordinates.
class CompositeSystem {
 public:
  CompositeSystem() : CompositeSystem(std::vector<int>{1}) {}
  explicit CompositeSystem(std::vector<int> dims);
  static CompositeSystem unit() { return CompositeSystem({1}); }

  int blocks() const { return int(dims_.size()); }
  int dim(int k) const { return dims_[k]; }
  const std::vector<int>& dims() const { return dims_; }
  int total_dim() const { return total_dim_; }    // D
  int coord_dim() const { return coord_dim_; }    // n
  int block_offset(int k) const { return offsets_[k]; }                 // coordinate offset
  int hilbert_offset(int k) const { return hilbert_offsets_[k]; }       // row/col offset in C^D
  int coord(int k, int i, int j) const { return offsets_[k] + i * dims_[k] + j; }

  CompositeSystem tensor(const CompositeSystem& rhs) const;  // pairwise, lexicographic
  bool operator==(const CompositeSystem& rhs) const { return dims_ == rhs.dims_; }
  std::string repr() const;

  // Coordinate vector of a block-diagonal D x D operator, and back.
  CVec vectorize(const CMat& op) const;
  CMat devectorize(const CVec& coords) const;

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_, hilbert_offsets_;
  int total_dim_ = 0, coord_dim_ = 0;
};

// Kraus operators of a map between single-block systems: X -> sum_k K X K^dag.
struct KrausSet {
  std::vector<CMat> ops;
};

// A pure (single-operator) map, identified up to a global phase.
struct PureMap {
  CMat mat;
};

bool phase_equal(const PureMap& f, const PureMap& g, Tolerance tol = {});

// A linear map between composite systems, stored as its superoperator on
// coordinate vectors. Complete positivity and trace preservation are
// properties to check, not assumptions, so arbitrary linear maps (effects,
// differences, projections of the decomposition engine) are representable.
class Channel {
 public:
  Channel() : Channel(CompositeSystem::unit(), CompositeSystem::unit(), CMat::Zero(1, 1)) {}
  Channel(CompositeSystem dom, CompositeSystem cod, CMat superop);

  static Channel identity(const CompositeSystem& sys);
  static Channel zero(const CompositeSystem& dom, const CompositeSystem& cod);
  static Channel discard(const CompositeSystem& sys);  // blockwise trace to I
  static Channel from_kraus(const KrausSet& ks, const CompositeSystem& dom,
                            const CompositeSystem& cod);
  static Channel from_choi(const CMat& choi, const CompositeSystem& dom,
                           const CompositeSystem& cod, Tolerance tol = {});

  const CompositeSystem& dom() const { return dom_; }
  const CompositeSystem& cod() const { return cod_; }
  const CMat& superop() const { return superop_; }

  // Choi matrix of the pinch-extension: the map is extended to all of
  // M_{D_in} by precomposing with the block-diagonal pinching, and
  // J = sum_ij E_ij (x) ext(E_ij) with index layout i*D_out + k. Computed on
  // demand; the channel itself stays immutable.
  CMat choi() const;

  Channel compose(const Channel& inner) const;  // this after inner
  Channel plus(const Channel& rhs) const;
  Channel scaled(Complex s) const;
  Channel tensor(const Channel& rhs) const;
  Channel adjoint() const;  // Hilbert-Schmidt adjoint

  // Apply to a concrete block-diagonal operator on C^D.
  CMat apply(const CMat& op) const;

  double distance(const Channel& rhs) const;
  bool approx_eq(const Channel& rhs, Tolerance tol = {}) const;

 private:
  CompositeSystem dom_, cod_;
  CMat superop_;  // coord_dim(cod) x coord_dim(dom)
};

struct ChannelChecks {
  bool cp = false;
  bool tp = false;
  bool subcausal = false;
  double choi_min_eig = 0.0;      // smallest eigenvalue of the Choi matrix
  double tp_residual = 0.0;       // max-norm of (Tr_out Choi - I)
  double herm_residual = 0.0;     // max-norm of (Choi - Choi^dag)
};

// cp: Choi of the pinch-extension is PSD (min eigenvalue >= -tol);
// tp: partial trace of the Choi over the output factor is the identity;
// subcausal: that partial trace is below the identity.
ChannelChecks validate_channel(const Channel& c, Tolerance tol = {});

// Embed a pure map as the channel X -> f X f^dag (single blocks).
Channel pure_embed(const PureMap& f);

// Hilbert-space direct sum of single-block systems [d_1..d_n] into [D]:
// kappa_i conjugates by the block isometry, pi_i compresses, and the pinch
// p = sum kappa_i . pi_i projects onto the block-diagonal. The pinch is not
// the identity for n >= 2, so this is a disjoint embedding that is not a
// biproduct.
struct QuantEmbedding {
  CompositeSystem target;
  std::vector<Channel> injections;
  std::vector<Channel> projections;
  Channel pinch;
};
QuantEmbedding disjoint_embedding(const std::vector<int>& dims);

struct EnvironmentCheck {
  bool discard_eq = false;  // discard . f^ = discard . g^ at the channel level
  bool gram_eq = false;     // f^dag f = g^dag g
  bool consistent = false;  // the two agree, as the environment axiom demands
};
EnvironmentCheck environment_axiom_check(const PureMap& f, const PureMap& g, Tolerance tol = {});

// -- theory wrapper -----------------------------------------------------------

struct QuantObj : ObjData {
  CompositeSystem sys;
  explicit QuantObj(CompositeSystem s) : sys(std::move(s)) {}
};

struct QuantMor : MorData {
  Channel ch;
  explicit QuantMor(Channel c) : ch(std::move(c)) {}
};

std::shared_ptr<const Theory> quant_theory();
Obj quant_obj(const CompositeSystem& sys);
Mor quant_mor(const Channel& ch);
const Channel& channel_payload(const Mor& f);

// -- random generators --------------------------------------------------------

CMat ginibre(int rows, int cols, Rng& rng);
CMat haar_unitary(int d, Rng& rng);
CMat random_density(int d, Rng& rng);            // full-rank trace-1 PSD, a.s.
CMat random_isometry(int rows, int cols, Rng& rng);  // rows >= cols
Channel random_cp(const CompositeSystem& dom, const CompositeSystem& cod, Rng& rng,
                  int kraus_per_block = 2);
Channel random_cptp(const CompositeSystem& dom, const CompositeSystem& cod, Rng& rng);
PureMap random_pure(int rows, int cols, Rng& rng);

}  // namespace karoubi::quant
