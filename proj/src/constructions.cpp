#include "karoubi/constructions.hpp"

#include <algorithm>
#include <sstream>

namespace karoubi {

// ================================ BiprodTheory ================================

Obj BiprodTheory::make_obj(std::vector<Obj> parts) const {
  for (const Obj& p : parts)
    if (p.theory_ptr().get() != base_.get())
      fail("MismatchedTheory", "list entries must live in the base theory");
  return Obj(shared_from_this(), std::make_shared<BiprodObj>(std::move(parts)));
}

Mor BiprodTheory::make_mor(const Obj& dom, const Obj& cod,
                           std::vector<std::vector<Mor>> entries) const {
  const auto& dp = parts(dom);
  const auto& cp = parts(cod);
  if (entries.size() != cp.size()) fail("ShapeMismatch", "entry matrix has wrong row count");
  for (size_t j = 0; j < entries.size(); ++j) {
    if (entries[j].size() != dp.size()) fail("ShapeMismatch", "entry matrix has wrong column count");
    for (size_t i = 0; i < entries[j].size(); ++i) {
      const Mor& e = entries[j][i];
      if (!base_->obj_equal(e.dom(), dp[i]) || !base_->obj_equal(e.cod(), cp[j]))
        fail("ShapeMismatch", "matrix entry has wrong dom/cod");
    }
  }
  return Mor(dom, cod, std::make_shared<BiprodMor>(std::move(entries)));
}

Obj BiprodTheory::embed_obj(const Obj& base_obj) const { return make_obj({base_obj}); }

Mor BiprodTheory::embed_mor(const Mor& base_mor) const {
  return make_mor(embed_obj(base_mor.dom()), embed_obj(base_mor.cod()), {{base_mor}});
}

Mor BiprodTheory::injection(const Obj& list, int i) const {
  const auto& ps = parts(list);
  std::vector<std::vector<Mor>> entries(ps.size());
  for (size_t j = 0; j < ps.size(); ++j)
    entries[j].push_back(int(j) == i ? base_->identity(ps[i]) : base_->zero(ps[i], ps[j]));
  return make_mor(embed_obj(ps[i]), list, std::move(entries));
}

Mor BiprodTheory::projection(const Obj& list, int i) const {
  const auto& ps = parts(list);
  std::vector<std::vector<Mor>> entries(1);
  for (size_t j = 0; j < ps.size(); ++j)
    entries[0].push_back(int(j) == i ? base_->identity(ps[i]) : base_->zero(ps[j], ps[i]));
  return make_mor(list, embed_obj(ps[i]), std::move(entries));
}

const std::vector<Obj>& BiprodTheory::parts(const Obj& list) { return list.as<BiprodObj>().parts; }

const Mor& BiprodTheory::entry(const Mor& m, int codIndex, int domIndex) {
  return m.as<BiprodMor>().entries.at(codIndex).at(domIndex);
}

std::string BiprodTheory::name() const { return base_->name() + "^(+)"; }

Obj BiprodTheory::unit() const { return embed_obj(base_->unit()); }

bool BiprodTheory::obj_equal(const Obj& a, const Obj& b) const {
  const auto& pa = parts(a);
  const auto& pb = parts(b);
  if (pa.size() != pb.size()) return false;
  for (size_t i = 0; i < pa.size(); ++i)
    if (!base_->obj_equal(pa[i], pb[i])) return false;
  return true;
}

std::string BiprodTheory::obj_repr(const Obj& a) const {
  std::ostringstream os;
  os << "<";
  const auto& ps = parts(a);
  for (size_t i = 0; i < ps.size(); ++i) os << (i ? "," : "") << base_->obj_repr(ps[i]);
  os << ">";
  return os.str();
}

Mor BiprodTheory::identity(const Obj& a) const {
  const auto& ps = parts(a);
  std::vector<std::vector<Mor>> entries(ps.size());
  for (size_t j = 0; j < ps.size(); ++j)
    for (size_t i = 0; i < ps.size(); ++i)
      entries[j].push_back(j == i ? base_->identity(ps[i]) : base_->zero(ps[i], ps[j]));
  return make_mor(a, a, std::move(entries));
}

Mor BiprodTheory::compose(const Mor& g, const Mor& f) const {
  require_composable(g, f);
  const auto& dp = parts(f.dom());
  const auto& mp = parts(f.cod());
  const auto& cp = parts(g.cod());
  std::vector<std::vector<Mor>> entries(cp.size());
  for (size_t j = 0; j < cp.size(); ++j)
    for (size_t i = 0; i < dp.size(); ++i) {
      Mor acc = base_->zero(dp[i], cp[j]);
      for (size_t k = 0; k < mp.size(); ++k)
        acc = base_->sum(acc, base_->compose(entry(g, int(j), int(k)), entry(f, int(k), int(i))));
      entries[j].push_back(acc);
    }
  return make_mor(f.dom(), g.cod(), std::move(entries));
}

Mor BiprodTheory::sum(const Mor& f, const Mor& g) const {
  require_parallel(f, g);
  const auto& fe = f.as<BiprodMor>().entries;
  std::vector<std::vector<Mor>> entries(fe.size());
  for (size_t j = 0; j < fe.size(); ++j)
    for (size_t i = 0; i < fe[j].size(); ++i)
      entries[j].push_back(base_->sum(entry(f, int(j), int(i)), entry(g, int(j), int(i))));
  return make_mor(f.dom(), f.cod(), std::move(entries));
}

Mor BiprodTheory::zero(const Obj& dom, const Obj& cod) const {
  const auto& dp = parts(dom);
  const auto& cp = parts(cod);
  std::vector<std::vector<Mor>> entries(cp.size());
  for (size_t j = 0; j < cp.size(); ++j)
    for (size_t i = 0; i < dp.size(); ++i) entries[j].push_back(base_->zero(dp[i], cp[j]));
  return make_mor(dom, cod, std::move(entries));
}

Mor BiprodTheory::scale(const Mor& s, const Mor& f) const {
  const Mor& sb = entry(s, 0, 0);
  const auto& fe = f.as<BiprodMor>().entries;
  std::vector<std::vector<Mor>> entries(fe.size());
  for (size_t j = 0; j < fe.size(); ++j)
    for (size_t i = 0; i < fe[j].size(); ++i)
      entries[j].push_back(base_->scale(sb, entry(f, int(j), int(i))));
  return make_mor(f.dom(), f.cod(), std::move(entries));
}

Mor BiprodTheory::discard(const Obj& a) const {
  const auto& ps = parts(a);
  std::vector<std::vector<Mor>> entries(1);
  for (const Obj& p : ps) entries[0].push_back(base_->discard(p));
  return make_mor(a, unit(), std::move(entries));
}

double BiprodTheory::distance(const Mor& f, const Mor& g) const {
  require_parallel(f, g);
  double d = 0.0;
  const auto& fe = f.as<BiprodMor>().entries;
  for (size_t j = 0; j < fe.size(); ++j)
    for (size_t i = 0; i < fe[j].size(); ++i)
      d = std::max(d, base_->distance(entry(f, int(j), int(i)), entry(g, int(j), int(i))));
  return d;
}

Obj BiprodTheory::tensor_obj(const Obj& a, const Obj& b) const {
  std::vector<Obj> out;
  for (const Obj& pa : parts(a))
    for (const Obj& pb : parts(b)) out.push_back(base_->tensor_obj(pa, pb));
  return make_obj(std::move(out));
}

Mor BiprodTheory::tensor(const Mor& f, const Mor& g) const {
  const size_t fn = parts(f.dom()).size(), fm = parts(f.cod()).size();
  const size_t gn = parts(g.dom()).size(), gm = parts(g.cod()).size();
  std::vector<std::vector<Mor>> entries(fm * gm);
  for (size_t j = 0; j < fm; ++j)
    for (size_t l = 0; l < gm; ++l) {
      auto& row = entries[j * gm + l];
      for (size_t i = 0; i < fn; ++i)
        for (size_t k = 0; k < gn; ++k)
          row.push_back(base_->tensor(entry(f, int(j), int(i)), entry(g, int(l), int(k))));
    }
  return make_mor(tensor_obj(f.dom(), g.dom()), tensor_obj(f.cod(), g.cod()), std::move(entries));
}

Mor BiprodTheory::adjoint(const Mor& f) const {
  const auto& fe = f.as<BiprodMor>().entries;
  const size_t rows = fe.size();
  const size_t cols = rows ? fe[0].size() : parts(f.dom()).size();
  std::vector<std::vector<Mor>> entries(cols);
  for (size_t i = 0; i < cols; ++i)
    for (size_t j = 0; j < rows; ++j) entries[i].push_back(base_->adjoint(entry(f, int(j), int(i))));
  return make_mor(f.cod(), f.dom(), std::move(entries));
}

std::shared_ptr<const BiprodTheory> biproduct_completion(std::shared_ptr<const Theory> base) {
  return std::make_shared<BiprodTheory>(std::move(base));
}

// ================================ KaroubiTheory ================================

Obj KaroubiTheory::make_obj(const Obj& base_obj, const Mor& idem, Tolerance tol) const {
  if (!base_->obj_equal(idem.dom(), base_obj) || !base_->obj_equal(idem.cod(), base_obj))
    fail("NotEndomorphism", "the idempotent must be an endomorphism of the carrier");
  if (!base_->approx_eq(base_->compose(idem, idem), idem, tol))
    fail("NotIdempotent", "p . p differs from p beyond tolerance");
  const bool causal = is_causal(idem, tol);
  if (causal_only_ && !causal)
    fail("NotCausal", "this envelope only admits causal idempotents");
  return Obj(shared_from_this(), std::make_shared<KaroubiObj>(base_obj, idem, causal));
}

Mor KaroubiTheory::make_mor(const Obj& dom, const Obj& cod, const Mor& f, Tolerance tol) const {
  const auto& d = dom.as<KaroubiObj>();
  const auto& c = cod.as<KaroubiObj>();
  if (!base_->obj_equal(f.dom(), d.base) || !base_->obj_equal(f.cod(), c.base))
    fail("ShapeMismatch", "underlying morphism has wrong dom/cod");
  // Hom membership: f = q . f . p. Store the normalised representative so
  // homsets stay closed under rounding.
  Mor g = base_->compose(c.idem, base_->compose(f, d.idem));
  if (!base_->approx_eq(g, f, tol))
    fail("NotInHom", "morphism does not satisfy f = q . f . p");
  return Mor(dom, cod, std::make_shared<KaroubiMor>(std::move(g)));
}

Obj KaroubiTheory::embed_obj(const Obj& base_obj) const {
  return make_obj(base_obj, base_->identity(base_obj));
}

Mor KaroubiTheory::embed_mor(const Mor& base_mor) const {
  return make_mor(embed_obj(base_mor.dom()), embed_obj(base_mor.cod()), base_mor);
}

const Obj& KaroubiTheory::base_of(const Obj& obj) { return obj.as<KaroubiObj>().base; }
const Mor& KaroubiTheory::idem_of(const Obj& obj) { return obj.as<KaroubiObj>().idem; }
bool KaroubiTheory::causal_flag(const Obj& obj) { return obj.as<KaroubiObj>().causal; }
const Mor& KaroubiTheory::payload(const Mor& m) { return m.as<KaroubiMor>().f; }

std::string KaroubiTheory::name() const {
  return (causal_only_ ? "Split_causal(" : "Split(") + base_->name() + ")";
}

Obj KaroubiTheory::unit() const { return embed_obj(base_->unit()); }

bool KaroubiTheory::obj_equal(const Obj& a, const Obj& b) const {
  const auto& oa = a.as<KaroubiObj>();
  const auto& ob = b.as<KaroubiObj>();
  return base_->obj_equal(oa.base, ob.base) && base_->approx_eq(oa.idem, ob.idem);
}

std::string KaroubiTheory::obj_repr(const Obj& a) const {
  return "(" + base_->obj_repr(a.as<KaroubiObj>().base) + ", p)";
}

Mor KaroubiTheory::identity(const Obj& a) const {
  // The identity on (A, p) is p itself.
  return Mor(a, a, std::make_shared<KaroubiMor>(a.as<KaroubiObj>().idem));
}

Mor KaroubiTheory::compose(const Mor& g, const Mor& f) const {
  require_composable(g, f);
  // Members compose to members exactly, no re-normalisation needed.
  return Mor(f.dom(), g.cod(), std::make_shared<KaroubiMor>(base_->compose(payload(g), payload(f))));
}

Mor KaroubiTheory::sum(const Mor& f, const Mor& g) const {
  require_parallel(f, g);
  return Mor(f.dom(), f.cod(), std::make_shared<KaroubiMor>(base_->sum(payload(f), payload(g))));
}

Mor KaroubiTheory::zero(const Obj& dom, const Obj& cod) const {
  return Mor(dom, cod,
             std::make_shared<KaroubiMor>(base_->zero(dom.as<KaroubiObj>().base,
                                                      cod.as<KaroubiObj>().base)));
}

Mor KaroubiTheory::scale(const Mor& s, const Mor& f) const {
  return Mor(f.dom(), f.cod(), std::make_shared<KaroubiMor>(base_->scale(payload(s), payload(f))));
}

Mor KaroubiTheory::discard(const Obj& a) const {
  const auto& o = a.as<KaroubiObj>();
  return Mor(a, unit(),
             std::make_shared<KaroubiMor>(base_->compose(base_->discard(o.base), o.idem)));
}

double KaroubiTheory::distance(const Mor& f, const Mor& g) const {
  require_parallel(f, g);
  return base_->distance(payload(f), payload(g));
}

Obj KaroubiTheory::tensor_obj(const Obj& a, const Obj& b) const {
  const auto& oa = a.as<KaroubiObj>();
  const auto& ob = b.as<KaroubiObj>();
  return make_obj(base_->tensor_obj(oa.base, ob.base), base_->tensor(oa.idem, ob.idem));
}

Mor KaroubiTheory::tensor(const Mor& f, const Mor& g) const {
  return Mor(tensor_obj(f.dom(), g.dom()), tensor_obj(f.cod(), g.cod()),
             std::make_shared<KaroubiMor>(base_->tensor(payload(f), payload(g))));
}

std::shared_ptr<const KaroubiTheory> karoubi_envelope(std::shared_ptr<const Theory> base,
                                                      bool causal_only) {
  return std::make_shared<KaroubiTheory>(std::move(base), causal_only);
}

// ============================ comparison machinery ============================

bool karoubi_iso_check(const Mor& p, const Mor& q, Tolerance tol) {
  const Theory& t = p.theory();
  if (!t.obj_equal(p.dom(), p.cod()) || !t.obj_equal(q.dom(), q.cod()) ||
      !t.obj_equal(p.dom(), q.dom()))
    fail("NotEndomorphism", "iso check needs idempotents on a common object");
  return t.approx_eq(t.compose(p, q), q, tol) && t.approx_eq(t.compose(q, p), p, tol);
}

Splitting splitting_transfer(const Splitting& q_split, const Mor& p, Tolerance tol) {
  const Theory& t = p.theory();
  const Mor& m = q_split.m;
  const Mor& e = q_split.e;
  if (!t.approx_eq(t.compose(e, m), t.identity(m.dom()), tol))
    fail("PreconditionFailed", "e . m is not the identity");
  Mor q = t.compose(m, e);
  if (!t.approx_eq(t.compose(p, q), q, tol) || !t.approx_eq(t.compose(q, p), p, tol))
    fail("PreconditionFailed", "p . q = q and q . p = p must hold to transfer");
  Splitting out{m, t.compose(e, p)};
  if (!t.approx_eq(t.compose(out.e, out.m), t.identity(m.dom()), tol) ||
      !t.approx_eq(t.compose(out.m, out.e), p, tol))
    fail("PreconditionFailed", "transferred splitting fails its identities");
  return out;
}

KaroubiBiproduct karoubi_biproduct(const std::shared_ptr<const KaroubiTheory>& split,
                                   const std::vector<Obj>& objs, const DisjointEmbedding& emb,
                                   Tolerance tol) {
  const auto& base = split->base();
  if (emb.injections.size() != objs.size() || emb.projections.size() != objs.size())
    fail("ShapeMismatch", "embedding arity differs from the object count");
  for (size_t i = 0; i < objs.size(); ++i)
    if (!base->obj_equal(KaroubiTheory::base_of(objs[i]), emb.injections[i].dom()))
      fail("ShapeMismatch", "embedding legs do not match the object carriers");

  Mor q = base->zero(emb.target, emb.target);
  for (size_t i = 0; i < objs.size(); ++i) {
    const Mor& pi_i = emb.projections[i];
    const Mor& kappa_i = emb.injections[i];
    q = base->sum(q, base->compose(kappa_i, base->compose(KaroubiTheory::idem_of(objs[i]), pi_i)));
  }

  KaroubiBiproduct out;
  out.object = split->make_obj(emb.target, q, tol);
  for (size_t i = 0; i < objs.size(); ++i) {
    const Mor& p_i = KaroubiTheory::idem_of(objs[i]);
    out.injections.push_back(
        split->make_mor(objs[i], out.object, base->compose(emb.injections[i], p_i), tol));
    out.projections.push_back(
        split->make_mor(out.object, objs[i], base->compose(p_i, emb.projections[i]), tol));
  }
  return out;
}

Obj functor_f_obj(const std::shared_ptr<const KaroubiTheory>& split, const DisjointEmbedding& emb,
                  Tolerance tol) {
  std::vector<Obj> embedded;
  embedded.reserve(emb.injections.size());
  for (const Mor& kappa : emb.injections) embedded.push_back(split->embed_obj(kappa.dom()));
  return karoubi_biproduct(split, embedded, emb, tol).object;
}

Mor functor_f_mor(const std::shared_ptr<const KaroubiTheory>& split, const Mor& biprod_mor,
                  const DisjointEmbedding& emb_dom, const DisjointEmbedding& emb_cod,
                  Tolerance tol) {
  const auto& base = split->base();
  const auto& entries = biprod_mor.as<BiprodMor>().entries;
  const size_t rows = emb_cod.injections.size();
  const size_t cols = emb_dom.injections.size();
  if (entries.size() != rows || (rows && entries[0].size() != cols))
    fail("ShapeMismatch", "matrix shape differs from the embeddings");
  Mor f = base->zero(emb_dom.target, emb_cod.target);
  for (size_t j = 0; j < rows; ++j)
    for (size_t i = 0; i < cols; ++i)
      f = base->sum(f, base->compose(emb_cod.injections[j],
                                     base->compose(entries[j][i], emb_dom.projections[i])));
  return split->make_mor(functor_f_obj(split, emb_dom, tol), functor_f_obj(split, emb_cod, tol), f,
                         tol);
}

Mor functor_f_preimage(const std::shared_ptr<const BiprodTheory>& biprod, const Mor& split_mor,
                       const DisjointEmbedding& emb_dom, const DisjointEmbedding& emb_cod) {
  const auto& base = biprod->base();
  const Mor& f = KaroubiTheory::payload(split_mor);
  std::vector<Obj> dom_parts, cod_parts;
  for (const Mor& kappa : emb_dom.injections) dom_parts.push_back(kappa.dom());
  for (const Mor& kappa : emb_cod.injections) cod_parts.push_back(kappa.dom());
  std::vector<std::vector<Mor>> entries(cod_parts.size());
  for (size_t j = 0; j < cod_parts.size(); ++j)
    for (size_t i = 0; i < dom_parts.size(); ++i)
      entries[j].push_back(
          base->compose(emb_cod.projections[j], base->compose(f, emb_dom.injections[i])));
  return biprod->make_mor(biprod->make_obj(dom_parts), biprod->make_obj(cod_parts),
                          std::move(entries));
}

// ========================= sub-causal idempotent repair =========================

Mor causalize_witness_state(const Mor& p, Tolerance tol) {
  const Theory& t = p.theory();
  Mor u = t.uniform_causal_state(p.dom());
  Mor pu = t.compose(p, u);
  Mor s = t.compose(t.discard(p.cod()), pu);
  if (t.distance(s, t.zero(s.dom(), s.cod())) <= tol.eps)
    fail("ZeroIdempotent", "p annihilates the canonical state; p is zero");
  return t.scale(t.inv_scalar(s), pu);
}

Mor causalize_subcausal(const Mor& p, const Mor& a, Tolerance tol) {
  const Theory& t = p.theory();
  if (!t.cancellative())
    fail("Unsupported", "sub-causal repair needs a cancellative theory");
  if (!t.obj_equal(p.dom(), p.cod())) fail("NotEndomorphism", "p must be an endomorphism");
  if (!is_idempotent(p, tol)) fail("NotIdempotent", "p . p differs from p");
  if (t.distance(p, t.zero(p.dom(), p.cod())) <= tol.eps)
    fail("ZeroIdempotent", "the zero idempotent cannot be repaired");
  if (!t.subcausal(p, tol)) fail("PreconditionFailed", "p is not sub-causal");

  const Obj& A = p.dom();
  Mor disc = t.discard(A);
  Mor disc_p = t.compose(disc, p);
  Mor s = t.compose(disc_p, a);
  if (t.distance(s, t.identity(t.unit())) > tol.eps)
    fail("BadState", "discard . p . a must equal 1");

  Mor x = t.difference(disc, disc_p);
  Mor q = t.sum(p, t.compose(t.compose(p, a), x));

  const Tolerance check{std::max(tol.eps, 1e-12) * 10};
  if (!is_causal(q, check) || !is_idempotent(q, check) ||
      !t.approx_eq(t.compose(p, q), q, check) || !t.approx_eq(t.compose(q, p), p, check) ||
      t.distance(t.compose(x, p), t.zero(A, t.unit())) > check.eps)
    fail("NumericalFailure", "repaired idempotent fails its defining identities");
  return q;
}

}  // namespace karoubi
