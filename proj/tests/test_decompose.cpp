#include <doctest.h>

#include <algorithm>
#include <chrono>

#include "karoubi/decompose.hpp"

using namespace karoubi;
using namespace karoubi::decompose;
using quant::Channel;
using quant::CompositeSystem;

namespace {

CMat E(int d, int i, int j) {
  CMat m = CMat::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

Channel dephasing(int d) {
  quant::KrausSet ks;
  for (int i = 0; i < d; ++i) ks.ops.push_back(E(d, i, i));
  return Channel::from_kraus(ks, CompositeSystem({d}), CompositeSystem({d}));
}

// span comparison via orthogonal projectors onto the spans
double span_distance(const std::vector<CMat>& basis, const std::vector<CMat>& target) {
  const int d = int(basis.empty() ? target[0].rows() : basis[0].rows());
  auto projector = [d](const std::vector<CMat>& mats) {
    CMat p = CMat::Zero(d * d, d * d);
    for (const CMat& m : mats) {
      CVec v(d * d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) v(i * d + j) = m(i, j);
      v.normalize();
      p += v * v.adjoint();
    }
    return p;
  };
  return (projector(basis) - projector(target)).cwiseAbs().maxCoeff();
}

mat::BoolMatrix bm(std::initializer_list<std::initializer_list<int>> rows) {
  const int r = int(rows.size());
  const int c = r ? int(rows.begin()->size()) : 0;
  mat::BoolMatrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (int v : row) m.set(i, j++, v != 0);
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("fixed_point_space") {
  SUBCASE("dephasing fixes exactly the diagonal matrices") {
    const auto basis = fixed_point_space(dephasing(2));
    REQUIRE(basis.size() == 2);
    CHECK(span_distance(basis, {E(2, 0, 0), E(2, 1, 1)}) < 1e-10);
    for (const auto& b : basis) CHECK((b - b.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("the identity channel fixes everything") {
    CHECK(fixed_point_space(Channel::identity(CompositeSystem({2}))).size() == 4);
  }
  SUBCASE("a replacer channel fixes only its target state") {
    Rng rng(3);
    const CMat sigma = quant::random_density(2, rng);
    // X -> Tr(X) sigma
    CMat s(4, 4);
    const CMat id2 = CMat::Identity(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) s(r * 2 + c, i * 2 + j) = sigma(r, c) * id2(i, j);
    Channel replace(CompositeSystem({2}), CompositeSystem({2}), s);
    const auto basis = fixed_point_space(replace);
    REQUIRE(basis.size() == 1);
    CHECK(span_distance(basis, {sigma}) < 1e-10);
  }
}

TEST_CASE("decompose_cptp_idempotent") {
  SUBCASE("qubit dephasing gives two singleton blocks and q = p") {
    const Channel p = dephasing(2);
    const auto dec = decompose_cptp_idempotent(p);
    REQUIRE(dec.blocks.size() == 2);
    CHECK(dec.blocks[0].dim_a == 1);
    CHECK(dec.blocks[1].dim_a == 1);
    CHECK(dec.blocks[0].dim_b == 1);
    CHECK(dec.residual_dim == 0);
    CHECK(dec.q.distance(p) < 1e-10);
    CHECK(verify_decomposition(p, dec, 1e-9).pass);
  }
  SUBCASE("planted 2x2 block with a fixed tau is recovered (spectrum match)") {
    Rng rng(5);
    const CMat tau = quant::random_density(2, rng);
    // p = Tr_B(.) (x) tau on C^2 (x) C^2, built directly in the aligned basis
    CMat s = CMat::Zero(16, 16);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int b1 = 0; b1 < 2; ++b1)
          for (int b2 = 0; b2 < 2; ++b2)
            for (int b = 0; b < 2; ++b)
              s((i * 2 + b1) * 4 + (j * 2 + b2), (i * 2 + b) * 4 + (j * 2 + b)) +=
                  tau(b1, b2);
    const Channel p(CompositeSystem({4}), CompositeSystem({4}), s);
    const auto dec = decompose_cptp_idempotent(p);
    REQUIRE(dec.blocks.size() == 1);
    CHECK(dec.blocks[0].dim_a == 2);
    CHECK(dec.blocks[0].dim_b == 2);
    Eigen::SelfAdjointEigenSolver<CMat> got(dec.blocks[0].tau);
    Eigen::SelfAdjointEigenSolver<CMat> want(tau);
    CHECK((got.eigenvalues() - want.eigenvalues()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(verify_decomposition(p, dec, 1e-9).pass);
  }
  SUBCASE("pinching onto M2 + M1 inside M3") {
    // fixed space: block-diagonal matrices, checked via the oracle span
    quant::KrausSet ks;
    CMat pi2 = CMat::Zero(3, 3);
    pi2(0, 0) = pi2(1, 1) = 1.0;
    CMat pi1 = CMat::Zero(3, 3);
    pi1(2, 2) = 1.0;
    ks.ops = {pi2, pi1};
    const Channel p = Channel::from_kraus(ks, CompositeSystem({3}), CompositeSystem({3}));
    const auto basis = fixed_point_space(p);
    CHECK(basis.size() == 5);
    const auto dec = decompose_cptp_idempotent(p);
    std::vector<int> dims;
    for (const auto& b : dec.blocks) dims.push_back(b.dim_a);
    std::sort(dims.begin(), dims.end());
    CHECK(dims == std::vector<int>{1, 2});
    for (const auto& b : dec.blocks) CHECK(b.dim_b == 1);
    CHECK(verify_decomposition(p, dec, 1e-9).pass);
  }
  SUBCASE("non-idempotent and non-TP inputs are refused") {
    CMat x(2, 2);
    x << 0, 1, 1, 0;
    CHECK_THROWS_WITH_AS(
        decompose_cptp_idempotent(quant::pure_embed(quant::PureMap{x})),
        doctest::Contains("NotIdempotent"), Error);
    CHECK_THROWS_WITH_AS(decompose_cptp_idempotent(dephasing(2).scaled(0.5)),
                         doctest::Contains("NotCPTP"), Error);
  }
}

TEST_CASE("verify_decomposition flags injected errors") {
  const Channel p = dephasing(2);
  auto dec = decompose_cptp_idempotent(p);
  SUBCASE("a perturbed m_k breaks e.m = id at 1e-6") {
    CMat s = dec.blocks[0].m.superop();
    s(0, 0) += 1e-3;
    dec.blocks[0].m = Channel(dec.blocks[0].m.dom(), dec.blocks[0].m.cod(), s);
    const auto rep = verify_decomposition(p, dec, 1e-6);
    bool em_failed = false;
    for (const auto& c : rep.checks)
      if (c.name.find("e.m = id") != std::string::npos && !c.pass) em_failed = true;
    CHECK(em_failed);
    CHECK(!rep.pass);
  }
  SUBCASE("a wrong tau state breaks p.q = q") {
    // rebuild block 0 with the wrong dual: swap in the other block's splitter
    auto other = dec;
    other.blocks[0].m = dec.blocks[1].m;
    other.q = other.blocks[0].m.compose(other.blocks[0].e);
    for (size_t k = 1; k < other.blocks.size(); ++k)
      other.q = other.q.plus(other.blocks[k].m.compose(other.blocks[k].e));
    const auto rep = verify_decomposition(p, other, 1e-9);
    CHECK(!rep.pass);
  }
}

TEST_CASE("planted-instance oracle at small scale") {
  const std::vector<std::vector<std::pair<int, int>>> specs = {
      {{1, 1}, {1, 1}}, {{2, 2}}, {{2, 1}, {1, 2}}, {{1, 3}}, {{2, 2}, {1, 1}}};
  int trial = 0;
  for (const auto& spec : specs) {
    for (std::uint64_t seed = 0; seed < 2; ++seed, ++trial) {
      const auto [p, planted] = random_idempotent_instance(spec, 100 + trial);
      const auto dec = decompose_cptp_idempotent(p, 1e-9);
      const auto rep = verify_decomposition(p, dec, 1e-8);
      CHECK(rep.pass);
      std::vector<int> got, want;
      for (const auto& b : dec.blocks) got.push_back(b.dim_a);
      for (const auto& b : planted.blocks) want.push_back(b.dim_a);
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      CHECK(got == want);
      // image-equality surrogate
      CHECK(p.compose(dec.q).distance(dec.q) < 1e-8);
      CHECK(dec.q.compose(p).distance(p) < 1e-8);
    }
  }
}

TEST_CASE("random_idempotent_instance") {
  SUBCASE("the generator self-checks: CPTP and idempotent") {
    const auto [p, planted] = random_idempotent_instance({{2, 2}}, 5);
    const auto checks = quant::validate_channel(p, 1e-9);
    CHECK(checks.cp);
    CHECK(checks.tp);
    CHECK(p.compose(p).distance(p) < 1e-12);
    CHECK(verify_decomposition(p, planted, 1e-9).pass);
  }
  SUBCASE("spec [(1,1),(1,1)] with trivial randomness is a diagonal pinching") {
    const auto [p, planted] = random_idempotent_instance({{1, 1}, {1, 1}}, 1);
    CHECK(p.dom() == CompositeSystem({2}));
    // it need not equal the computational-basis dephasing, but it is a
    // rank-2-fixed-space causal idempotent
    CHECK(fixed_point_space(p).size() == 2);
  }
  SUBCASE("the empty spec is refused") {
    CHECK_THROWS_WITH_AS(random_idempotent_instance({}, 0), doctest::Contains("EmptySpec"),
                         Error);
  }
}

TEST_CASE("flor_decompose") {
  SUBCASE("the 2x2 textbook example has exactly one pair") {
    RMat p(2, 2);
    p << 1, 1, 0, 0;
    const auto dec = flor_decompose(p);
    REQUIRE(dec.pairs.size() == 1);
    RVec eu(2), ev(2);
    eu << 1, 0;
    ev << 1, 1;
    CHECK((dec.pairs[0].first - eu).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((dec.pairs[0].second - ev).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("the identity splits into the standard basis pairs") {
    const auto dec = flor_decompose(RMat::Identity(3, 3));
    CHECK(dec.pairs.size() == 3);
    for (const auto& [u, v] : dec.pairs) CHECK(std::abs(v.dot(u) - 1.0) < 1e-12);
  }
  SUBCASE("planted biorthogonal instances are recovered") {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
      const int r = rng.uniform_int(1, 3);
      std::vector<int> sizes;
      int n = 0;
      for (int i = 0; i < r; ++i) {
        sizes.push_back(rng.uniform_int(1, 3));
        n += sizes.back();
      }
      const int halo = rng.uniform_int(0, 2);
      RMat p = RMat::Zero(n + halo, n + halo);
      int off = 0;
      std::vector<RVec> us, vs;
      for (int i = 0; i < r; ++i) {
        RVec u = RVec::Zero(n + halo), v = RVec::Zero(n + halo);
        for (int k = 0; k < sizes[i]; ++k) {
          u(off + k) = 0.1 + rng.uniform();
          v(off + k) = 0.1 + rng.uniform();
        }
        for (int h = 0; h < halo; ++h) v(n + h) = rng.uniform();
        v /= v.dot(u);
        p += u * v.transpose();
        us.push_back(u);
        vs.push_back(v);
        off += sizes[i];
      }
      const auto dec = flor_decompose(p, 1e-9);
      REQUIRE(int(dec.pairs.size()) == r);
      RMat sum = RMat::Zero(n + halo, n + halo);
      for (size_t i = 0; i < dec.pairs.size(); ++i) {
        sum += dec.pairs[i].first * dec.pairs[i].second.transpose();
        for (size_t j = 0; j < dec.pairs.size(); ++j)
          CHECK(std::abs(dec.pairs[j].second.dot(dec.pairs[i].first) - (i == j ? 1 : 0)) <
                1e-9);
      }
      CHECK((sum - p).cwiseAbs().maxCoeff() < 1e-9);
      // z_i z_j = delta_ij z_i entrywise
      for (size_t i = 0; i < dec.pairs.size(); ++i)
        for (size_t j = 0; j < dec.pairs.size(); ++j) {
          const RMat zi = dec.pairs[i].first * dec.pairs[i].second.transpose();
          const RMat zj = dec.pairs[j].first * dec.pairs[j].second.transpose();
          const RMat prod = zi * zj;
          CHECK((prod - (i == j ? zi : RMat::Zero(zi.rows(), zi.cols())))
                    .cwiseAbs()
                    .maxCoeff() < 1e-9);
        }
    }
  }
  SUBCASE("non-idempotents are refused") {
    RMat p(2, 2);
    p << 1, 1, 1, 1;  // p^2 = 2p over the reals
    CHECK_THROWS_WITH_AS(flor_decompose(p), doctest::Contains("NotIdempotent"), Error);
  }
}

TEST_CASE("search_splitting_bool") {
  SUBCASE("the counterexample relation admits no splitting up to dim 4") {
    const auto found = search_splitting_bool(bm({{1, 1}, {0, 1}}), 4);
    CHECK(!found.has_value());
  }
  SUBCASE("the identity splits at b = n") {
    // m = e = id is one witness; the lexicographic scan returns the swap
    // pair first, which splits the identity just as well.
    const auto found = search_splitting_bool(bm({{1, 0}, {0, 1}}), 4);
    REQUIRE(found.has_value());
    CHECK(found->e.rows() == 2);
    CHECK(found->e.matmul(found->m) == mat::BoolMatrix::identity(2));
    CHECK(found->m.matmul(found->e) == mat::BoolMatrix::identity(2));
  }
  SUBCASE("the all-ones relation splits at b = 1") {
    const auto found = search_splitting_bool(bm({{1, 1}, {1, 1}}), 4);
    REQUIRE(found.has_value());
    CHECK(found->e.rows() == 1);
    CHECK(found->m == bm({{1}, {1}}));
    CHECK(found->e == bm({{1, 1}}));
  }
  SUBCASE("the zero relation splits through the empty middle") {
    const auto found = search_splitting_bool(mat::BoolMatrix(2, 2), 4);
    REQUIRE(found.has_value());
    CHECK(found->e.rows() == 0);
  }
  SUBCASE("any returned pair verifies exactly") {
    const auto found = search_splitting_bool(bm({{1, 1}, {1, 1}}), 2);
    REQUIRE(found.has_value());
    CHECK(found->e.matmul(found->m) == mat::BoolMatrix::identity(1));
    CHECK(found->m.matmul(found->e) == bm({{1, 1}, {1, 1}}));
  }
  SUBCASE("non-idempotent relations are refused") {
    CHECK_THROWS_WITH_AS(search_splitting_bool(bm({{0, 1}, {1, 0}}), 2),
                         doctest::Contains("NotIdempotent"), Error);
  }
  SUBCASE("n=2, b_max=4 completes within a second") {
    const auto t0 = std::chrono::steady_clock::now();
    (void)search_splitting_bool(bm({{1, 1}, {0, 1}}), 4);
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(dt < 1.0);
  }
}
