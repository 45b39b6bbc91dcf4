#include <doctest.h>

#include "karoubi/constructions.hpp"
#include "karoubi/decompose.hpp"
#include "karoubi/mat.hpp"
#include "karoubi/quant.hpp"

using namespace karoubi;

namespace {

quant::Channel dephasing2() {
  using namespace quant;
  CMat k0 = CMat::Zero(2, 2), k1 = CMat::Zero(2, 2);
  k0(0, 0) = 1.0;
  k1(1, 1) = 1.0;
  return Channel::from_kraus(KrausSet{{k0, k1}}, CompositeSystem({2}), CompositeSystem({2}));
}

}  // namespace

TEST_CASE("biproduct completion satisfies the biproduct equations") {
  SUBCASE("exactly over the matrix theories") {
    for (const auto& base : {mat::frel_theory(), mat::class_theory()}) {
      CAPTURE(base->name());
      auto bp = biproduct_completion(base);
      Obj list = bp->make_obj({mat::mat_obj(base, 2), mat::mat_obj(base, 3)});
      Mor id = bp->identity(list);
      Mor complete = bp->zero(list, list);
      for (int i = 0; i < 2; ++i) {
        Mor ki = bp->injection(list, i);
        for (int j = 0; j < 2; ++j) {
          Mor pj = bp->projection(list, j);
          Mor comp = bp->compose(pj, ki);
          if (i == j)
            CHECK(bp->distance(comp, bp->identity(bp->embed_obj(mat::mat_obj(base, i == 0 ? 2 : 3)))) == 0.0);
          else
            CHECK(bp->distance(comp, bp->zero(ki.dom(), pj.cod())) == 0.0);
        }
        complete = bp->sum(complete, bp->compose(ki, bp->projection(list, i)));
      }
      CHECK(bp->distance(complete, id) == 0.0);
    }
  }
  SUBCASE("within tolerance over quantum channels") {
    auto base = quant::quant_theory();
    auto bp = biproduct_completion(base);
    Obj list = bp->make_obj({quant::quant_obj(quant::CompositeSystem({2})),
                             quant::quant_obj(quant::CompositeSystem({3}))});
    Mor complete = bp->zero(list, list);
    for (int i = 0; i < 2; ++i)
      complete = bp->sum(complete, bp->compose(bp->injection(list, i), bp->projection(list, i)));
    CHECK(bp->distance(complete, bp->identity(list)) < 1e-12);
  }
}

TEST_CASE("biproduct discard concatenates the component discards") {
  auto base = mat::class_theory();
  auto bp = biproduct_completion(base);
  Obj list = bp->make_obj({mat::mat_obj(base, 2), mat::mat_obj(base, 3)});
  Mor d = bp->discard(list);
  CHECK(mat::real_payload(BiprodTheory::entry(d, 0, 0)) == RMat::Ones(1, 2));
  CHECK(mat::real_payload(BiprodTheory::entry(d, 0, 1)) == RMat::Ones(1, 3));
}

TEST_CASE("the empty list is a zero object") {
  auto base = mat::class_theory();
  auto bp = biproduct_completion(base);
  Obj zero_obj = bp->make_obj({});
  Obj two = bp->embed_obj(mat::mat_obj(base, 2));
  Mor into = bp->zero(two, zero_obj);
  Mor outof = bp->zero(zero_obj, two);
  // the only endomorphism of <> is its identity, which is also zero
  CHECK(bp->distance(bp->identity(zero_obj), bp->zero(zero_obj, zero_obj)) == 0.0);
  CHECK(bp->distance(bp->compose(outof, into), bp->zero(two, two)) == 0.0);
}

TEST_CASE("Karoubi envelope basics") {
  auto base = quant::quant_theory();
  auto split = karoubi_envelope(base);
  Mor p = quant::quant_mor(dephasing2());

  SUBCASE("the embedding A -> (A, id) leaves payloads alone") {
    Mor f = quant::quant_mor(dephasing2());
    Mor emb = split->embed_mor(f);
    CHECK(base->distance(KaroubiTheory::payload(emb), f) == 0.0);
  }
  SUBCASE("the identity on (A, p) is p") {
    Obj obj = split->make_obj(p.dom(), p);
    CHECK(base->distance(KaroubiTheory::payload(split->identity(obj)), p) == 0.0);
  }
  SUBCASE("discard of (A, p) sends a fixed state of p to 1") {
    Obj obj = split->make_obj(p.dom(), p);
    // |0><0| is fixed by dephasing; as a state it is causal
    CMat ket = CMat::Zero(2, 2);
    ket(0, 0) = 1.0;
    CVec col = quant::CompositeSystem({2}).vectorize(ket);
    quant::Channel state(quant::CompositeSystem::unit(), quant::CompositeSystem({2}), col);
    Mor sm = split->make_mor(split->unit(), obj, quant::quant_mor(state));
    Mor composite = split->compose(split->discard(obj), sm);
    CHECK(base->distance(KaroubiTheory::payload(composite),
                         base->identity(base->unit())) < 1e-12);
  }
  SUBCASE("membership is enforced") {
    Obj obj = split->make_obj(p.dom(), p);
    // the X unitary does not satisfy f = p . f . p
    CMat x(2, 2);
    x << 0, 1, 1, 0;
    Mor xm = quant::quant_mor(quant::pure_embed(quant::PureMap{x}));
    CHECK_THROWS_AS(split->make_mor(obj, obj, xm), Error);
  }
  SUBCASE("non-idempotents are rejected as objects") {
    CMat x(2, 2);
    x << 0, 1, 1, 0;
    Mor xm = quant::quant_mor(quant::pure_embed(quant::PureMap{x}));
    CHECK_THROWS_AS(split->make_obj(xm.dom(), xm), Error);
  }
  SUBCASE("the causal-only envelope refuses non-causal idempotents") {
    auto causal_split = karoubi_envelope(base, true);
    CMat pi = CMat::Zero(2, 2);
    pi(0, 0) = 1.0;
    Mor compress = quant::quant_mor(quant::pure_embed(quant::PureMap{pi}));
    CHECK(is_idempotent(compress, 1e-12));
    CHECK_THROWS_AS(causal_split->make_obj(compress.dom(), compress), Error);
    CHECK_NOTHROW(causal_split->make_obj(p.dom(), p));
  }
}

TEST_CASE("karoubi_biproduct") {
  auto base = quant::quant_theory();
  auto split = karoubi_envelope(base);

  SUBCASE("identity idempotents reduce to the pinch of the embedding") {
    std::vector<Obj> objs = {split->embed_obj(quant::quant_obj(quant::CompositeSystem({2}))),
                             split->embed_obj(quant::quant_obj(quant::CompositeSystem({3})))};
    std::vector<Obj> carriers = {KaroubiTheory::base_of(objs[0]), KaroubiTheory::base_of(objs[1])};
    auto emb = base->disjoint_embedding(carriers);
    auto bp = karoubi_biproduct(split, objs, emb);
    CHECK(base->distance(KaroubiTheory::idem_of(bp.object), emb.pinch) < 1e-12);
  }

  SUBCASE("two qubit dephasings over dims [2,2] give a causal biproduct in Split") {
    Mor p = quant::quant_mor(dephasing2());
    std::vector<Obj> objs = {split->make_obj(p.dom(), p), split->make_obj(p.dom(), p)};
    auto emb = base->disjoint_embedding({p.dom(), p.dom()});
    auto bp = karoubi_biproduct(split, objs, emb);
    CHECK(is_causal(KaroubiTheory::idem_of(bp.object), 1e-9));
    CHECK(is_idempotent(KaroubiTheory::idem_of(bp.object), 1e-9));
    // the five biproduct identities, in the envelope
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Mor comp = split->compose(bp.projections[j], bp.injections[i]);
        Mor expected = (i == j) ? split->identity(objs[i]) : split->zero(objs[i], objs[j]);
        CHECK(split->distance(comp, expected) < 1e-9);
      }
    Mor total = split->zero(bp.object, bp.object);
    for (int i = 0; i < 2; ++i)
      total = split->sum(total, split->compose(bp.injections[i], bp.projections[i]));
    CHECK(split->distance(total, split->identity(bp.object)) < 1e-9);
  }

  SUBCASE("FRel with the disjoint-union embedding gives a block-diagonal relation") {
    auto fr = mat::frel_theory();
    auto fsplit = karoubi_envelope(fr);
    mat::BoolMatrix all2 = mat::BoolMatrix::ones(2, 2);
    Mor p1 = mat::bool_mor(fr, all2);  // idempotent in the boolean semiring
    Mor p2 = fr->identity(mat::mat_obj(fr, 3));
    std::vector<Obj> objs = {fsplit->make_obj(p1.dom(), p1), fsplit->make_obj(p2.dom(), p2)};
    auto emb = fr->disjoint_embedding({p1.dom(), p2.dom()});
    auto bp = karoubi_biproduct(fsplit, objs, emb);
    mat::BoolMatrix expected(5, 5);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) expected.set(i, j, true);
    for (int i = 2; i < 5; ++i) expected.set(i, i, true);
    CHECK(mat::bool_payload(KaroubiTheory::idem_of(bp.object)) == expected);
  }
}

TEST_CASE("the comparison functor F") {
  auto base = quant::quant_theory();
  auto split = karoubi_envelope(base);
  auto bp = biproduct_completion(base);
  std::vector<Obj> parts = {quant::quant_obj(quant::CompositeSystem({2})),
                            quant::quant_obj(quant::CompositeSystem({2}))};
  Obj list = bp->make_obj(parts);
  auto emb = base->disjoint_embedding(parts);

  SUBCASE("a single-entry identity matrix maps to the identity of (A, pinch)") {
    std::vector<Obj> one_part = {parts[0]};
    auto emb1 = base->disjoint_embedding(one_part);
    Obj single = bp->make_obj(one_part);
    Mor fid = functor_f_mor(split, bp->identity(single), emb1, emb1);
    Obj fobj = functor_f_obj(split, emb1);
    CHECK(split->distance(fid, split->identity(fobj)) < 1e-12);
  }

  SUBCASE("the empty list maps to a zero object (A, 0)") {
    auto emb0 = base->disjoint_embedding({});
    Obj fzero = functor_f_obj(split, emb0);
    CHECK(base->distance(KaroubiTheory::idem_of(fzero),
                         base->zero(KaroubiTheory::base_of(fzero), KaroubiTheory::base_of(fzero))) == 0.0);
  }

  SUBCASE("F preserves compose, sum, identity, discard; and is full") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::vector<Mor>> em(2), en(2);
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
          em[j].push_back(base->random_morphism(parts[i], parts[j], rng));
          en[j].push_back(base->random_morphism(parts[i], parts[j], rng));
        }
      Mor M = bp->make_mor(list, list, em);
      Mor N = bp->make_mor(list, list, en);
      Mor fm = functor_f_mor(split, M, emb, emb);
      Mor fn = functor_f_mor(split, N, emb, emb);
      CHECK(split->distance(functor_f_mor(split, bp->compose(M, N), emb, emb),
                            split->compose(fm, fn)) < 1e-9);
      CHECK(split->distance(functor_f_mor(split, bp->sum(M, N), emb, emb),
                            split->sum(fm, fn)) < 1e-9);
      // fullness round trip
      CHECK(bp->distance(functor_f_preimage(bp, fm, emb, emb), M) < 1e-9);
    }
    Obj fobj = functor_f_obj(split, emb);
    CHECK(split->distance(functor_f_mor(split, bp->identity(list), emb, emb),
                          split->identity(fobj)) < 1e-12);
    // discard: F(discard) = discard of (A, pinch)
    std::vector<std::vector<Mor>> drow(1);
    for (int i = 0; i < 2; ++i) drow[0].push_back(base->discard(parts[i]));
    Mor dm = bp->make_mor(list, bp->unit(), drow);
    auto emb_unit = base->disjoint_embedding({base->unit()});
    Mor fd = functor_f_mor(split, dm, emb, emb_unit);
    // compare against the envelope discard composed with the unit part
    Mor expected = split->discard(fobj);
    CHECK(base->distance(KaroubiTheory::payload(fd), KaroubiTheory::payload(expected)) < 1e-9);
  }
}

TEST_CASE("karoubi_iso_check") {
  auto base = quant::quant_theory();
  Mor p = quant::quant_mor(dephasing2());
  SUBCASE("p with itself") { CHECK(karoubi_iso_check(p, p, 1e-12)); }
  SUBCASE("dephasing against the identity fails") {
    Mor id = base->identity(p.dom());
    CHECK(!karoubi_iso_check(p, id, 1e-9));
  }
  SUBCASE("a CPTP idempotent against its canonical block form") {
    auto [pc, planted] = decompose::random_idempotent_instance({{2, 1}, {1, 2}}, 42);
    auto dec = decompose::decompose_cptp_idempotent(pc, 1e-9);
    CHECK(karoubi_iso_check(quant::quant_mor(pc), quant::quant_mor(dec.q), 1e-8));
  }
}

TEST_CASE("splitting_transfer") {
  auto base = quant::quant_theory();
  SUBCASE("transferring to q itself returns (m, e)") {
    auto [pc, planted] = decompose::random_idempotent_instance({{1, 2}, {1, 1}}, 7);
    Splitting s{quant::quant_mor(planted.split_m), quant::quant_mor(planted.split_e)};
    Splitting out = splitting_transfer(s, quant::quant_mor(pc), 1e-9);
    CHECK(base->distance(out.e, s.e) < 1e-9);
  }
  SUBCASE("transfer from the canonical q to the original idempotent") {
    auto [pc, planted] = decompose::random_idempotent_instance({{2, 2}}, 11);
    auto dec = decompose::decompose_cptp_idempotent(pc, 1e-9);
    Splitting s{quant::quant_mor(dec.split_m), quant::quant_mor(dec.split_e)};
    Mor pm = quant::quant_mor(pc);
    Splitting out = splitting_transfer(s, pm, 1e-8);
    CHECK(base->distance(base->compose(out.e, out.m), base->identity(out.m.dom())) < 1e-9);
    CHECK(base->distance(base->compose(out.m, out.e), pm) < 1e-9);
  }
  SUBCASE("bad preconditions are refused") {
    Mor p = quant::quant_mor(dephasing2());
    Mor id = base->identity(p.dom());
    Splitting s{id, id};  // m.e = id but p.q != q for q = id
    CHECK_THROWS_AS(splitting_transfer(s, p, 1e-9), Error);
  }
}

TEST_CASE("causalize_subcausal") {
  auto base = quant::quant_theory();
  SUBCASE("already-causal idempotents are repaired to themselves") {
    Mor p = quant::quant_mor(dephasing2());
    Mor a = causalize_witness_state(p);
    Mor q = causalize_subcausal(p, a);
    CHECK(base->distance(q, p) < 1e-12);
  }
  SUBCASE("rank-3 projector on two qubits becomes a CPTP idempotent") {
    CMat pi = CMat::Identity(4, 4);
    pi(3, 3) = 0.0;
    Mor p = quant::quant_mor(quant::pure_embed(quant::PureMap{pi}));
    CHECK(is_subcausal(p, 1e-9));
    CHECK(!is_causal(p, 1e-9));
    Mor a = causalize_witness_state(p);
    Mor q = causalize_subcausal(p, a);
    const auto checks = quant::validate_channel(quant::channel_payload(q), 1e-9);
    CHECK(checks.cp);
    CHECK(checks.tp);
    CHECK(is_idempotent(q, 1e-9));
    CHECK(karoubi_iso_check(q, p, 1e-9));
    // x . p = 0 (cancellativity consequence)
    Mor x = base->difference(base->discard(p.dom()),
                             base->compose(base->discard(p.cod()), p));
    CHECK(base->distance(base->compose(x, p), base->zero(p.dom(), base->unit())) < 1e-12);
  }
  SUBCASE("the zero idempotent is refused") {
    Obj two = quant::quant_obj(quant::CompositeSystem({2}));
    Mor z = base->zero(two, two);
    CHECK_THROWS_WITH_AS(causalize_subcausal(z, base->uniform_causal_state(two)),
                         doctest::Contains("ZeroIdempotent"), Error);
  }
  SUBCASE("a state with discard . p . a != 1 is rejected") {
    Mor p = quant::quant_mor(dephasing2());
    Mor half = quant::quant_mor(quant::channel_payload(
        causalize_witness_state(p)).scaled(0.5));
    CHECK_THROWS_WITH_AS(causalize_subcausal(p, half), doctest::Contains("BadState"), Error);
  }
  SUBCASE("Class substochastic idempotents repair too") {
    auto cl = mat::class_theory();
    RMat sub(2, 2);
    sub << 1.0, 0.5, 0.0, 0.0;  // idempotent, column sums 1 and 0.5
    Mor p = mat::real_mor(cl, sub);
    CHECK(is_idempotent(p, 1e-12));
    CHECK(is_subcausal(p, 1e-12));
    Mor a = causalize_witness_state(p);
    Mor q = causalize_subcausal(p, a);
    CHECK(is_causal(q, 1e-12));
    CHECK(is_idempotent(q, 1e-12));
    CHECK(karoubi_iso_check(q, p, 1e-12));
  }
}
