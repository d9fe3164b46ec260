#include "histforce/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "histforce/errors.hpp"
#include "histforce/generate.hpp"
#include "histforce/signatures.hpp"
#include "histforce/term.hpp"
#include "histforce/wire.hpp"

namespace histforce {

namespace {

using nlohmann::ordered_json;

class stopwatch {
public:
    stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

template <typename T>
ordered_json num_list(const std::vector<T>& xs) {
    ordered_json a = ordered_json::array();
    for (const T& x : xs) a.push_back(x);
    return a;
}

check_report finish(const char* name, const condition& p, const stopwatch& sw, ordered_json cex) {
    check_report r;
    r.name = name;
    r.condition_id = condition_id(p);
    r.pass = cex.is_null();
    r.counterexample = std::move(cex);
    r.ms = sw.ms();
    return r;
}

// Run the body; a library error is a failing verdict, never a crash.
template <typename Fn>
check_report guarded(const char* name, const condition_ptr& p, Fn&& body) {
    stopwatch sw;
    ordered_json cex;
    try {
        cex = body();
    } catch (const std::exception& e) {
        cex = ordered_json{{"error", e.what()}};
    }
    return finish(name, *p, sw, std::move(cex));
}

std::vector<condition_ptr> all_components(const condition_ptr& p) {
    std::vector<condition_ptr> out;
    for (std::uint32_t a = 0; a <= p->height(); ++a)
        for (const auto& c : components(p, a)) out.push_back(c);
    return out;
}

order_map shifted(const condition& p, gen_index delta) {
    std::vector<gen_index> to;
    to.reserve(p.support().size());
    for (gen_index j : p.support()) to.push_back(j + delta);
    return order_map::between(p.support(), to);
}

order_map restrict_map(const order_map& h, const std::vector<gen_index>& from) {
    std::vector<gen_index> to;
    to.reserve(from.size());
    for (gen_index j : from) to.push_back(h.map(j));
    return order_map::between(from, to);
}

std::vector<std::vector<std::uint32_t>> level_subsets(std::uint32_t ht) {
    std::vector<std::vector<std::uint32_t>> out;
    for (std::uint32_t mask = 0; mask < (1u << ht); ++mask) {
        std::vector<std::uint32_t> z;
        for (std::uint32_t b = 0; b < ht; ++b)
            if (mask >> b & 1u) z.push_back(b);
        out.push_back(std::move(z));
    }
    return out;
}

std::vector<std::vector<std::uint32_t>> closed_family(const condition_ptr& p) {
    std::vector<std::vector<std::uint32_t>> out;
    for (auto& z : level_subsets(p->height()))
        if (is_p_closed(p, z)) out.push_back(std::move(z));
    return out;
}

bool contains_level(const std::vector<std::uint32_t>& z, std::uint32_t b) {
    return std::binary_search(z.begin(), z.end(), b);
}

// Does the positional level map Z0 -> Z1 fix every common level?  Sizes equal.
bool level_map_fixes_overlap(const std::vector<std::uint32_t>& z0,
                             const std::vector<std::uint32_t>& z1) {
    for (std::size_t l = 0; l < z0.size(); ++l) {
        if (contains_level(z1, z0[l]) && z1[l] != z0[l]) return false;
        if (contains_level(z0, z1[l]) && z0[l] != z1[l]) return false;
    }
    return true;
}

// Independent membership oracle: recurse on the construction data only, never
// touching the stored table.  bits are positional over c.support().
bool oracle_in_f(const condition& c, std::uint64_t bits) {
    if (c.is_atomic()) return true;
    const auto& sup = c.support();
    auto bit_of = [&](gen_index j) -> bool {
        auto it = std::lower_bound(sup.begin(), sup.end(), j);
        return (bits >> std::size_t(it - sup.begin())) & 1u;
    };
    for (std::uint32_t xi = 0; xi < c.width(); ++xi) {
        const condition& ch = *c.part_child(xi);
        std::uint64_t sub = 0;
        const auto& csup = ch.support();
        for (std::size_t k = 0; k < csup.size(); ++k)
            if (bit_of(csup[k])) sub |= std::uint64_t(1) << k;
        if (!oracle_in_f(ch, sub)) return false;
    }
    bool prev = false;
    bool have_prev = false;
    for (std::uint32_t t3 = 0; 3 * t3 + 2 < c.width(); ++t3) {
        int votes = 0;
        for (std::uint32_t r = 0; r < 3; ++r) {
            const auto& v = c.parts()[3 * t3 + r].v;
            std::vector<bool> args;
            args.reserve(v.size());
            for (gen_index j : v) args.push_back(bit_of(j));
            if (c.tau_star()->eval(args)) ++votes;
        }
        bool m = votes >= 2;
        if (have_prev && prev && !m) return false;
        prev = m;
        have_prev = true;
    }
    return true;
}

condition_ptr rebuild(const condition& c) {
    if (c.is_atomic()) return condition::atomic(c.width(), c.atom_index());
    std::vector<condition::part> parts;
    parts.reserve(c.width());
    for (std::uint32_t xi = 0; xi < c.width(); ++xi)
        parts.push_back({rebuild(*c.part_child(xi)), c.parts()[xi].v});
    return condition::amalgamate(c.zeta_star(), c.tau_star(), c.heart(), parts);
}

} // namespace

check_report check_clauses(const condition_ptr& p, const check_budget& budget) {
    return guarded("clauses", p, [&]() -> ordered_json {
        condition_ptr r = rebuild(*p);
        if (!r->equals(*p))
            return {{"law", "reconstruction"}, {"error", "constructors rebuilt a different condition"}};
        if (!(r->table() == p->table()))
            return {{"law", "reconstruction"}, {"error", "rebuilt table differs"}};
        const auto& tbl = p->table();
        const std::size_t m = tbl.domain().size();
        auto mismatch = [&](std::uint64_t bits) -> std::optional<ordered_json> {
            bool want = oracle_in_f(*p, bits);
            bool got = tbl.has_row(bits);
            if (want == got) return std::nullopt;
            return ordered_json{
                {"law", "membership"}, {"assignment", bits}, {"stored", got}, {"oracle", want}};
        };
        if (m < 63 && (std::uint64_t(1) << m) <= budget.max_exhaustive) {
            for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << m); ++bits)
                if (auto bad = mismatch(bits)) return *bad;
        } else {
            for (std::uint64_t row : tbl.rows())
                if (auto bad = mismatch(row)) return *bad;
            splitmix64 rng(budget.seed ^ 0x636c617573657301ull);
            std::uint64_t mask = m >= 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << m) - 1);
            for (std::size_t i = 0; i < budget.samples; ++i) {
                if (auto bad = mismatch(rng.next() & mask)) {
                    (*bad)["seed"] = budget.seed;
                    return *bad;
                }
            }
        }
        return ordered_json();
    });
}

check_report check_history_invariants(const condition_ptr& p) {
    return guarded("history_invariants", p, [&]() -> ordered_json {
        const std::uint32_t ht = p->height();
        const auto& u = p->support();
        const history_value theta = history_value::theta();

        // fingerprints are exactly the through-a-part levels of the h table
        for (gen_index j : u) {
            std::vector<std::uint32_t> direct;
            for (std::uint32_t b = 0; b < ht; ++b)
                if (p->history(j, b).is_index()) direct.push_back(b);
            if (p->fingerprint(j) != direct)
                return {{"law", "fingerprint matches history"}, {"j", j}};
        }

        // distinct generators show two non-theta, unequal values at some level
        for (std::size_t a = 0; a < u.size(); ++a) {
            for (std::size_t b = a + 1; b < u.size(); ++b) {
                bool separated = false;
                for (std::uint32_t beta = 0; beta < ht && !separated; ++beta) {
                    history_value ha = p->history(u[a], beta);
                    history_value hb = p->history(u[b], beta);
                    separated = !(ha == theta) && !(hb == theta) && !(ha == hb);
                }
                if (!separated)
                    return {{"law", "pairs separate"}, {"i", u[a]}, {"j", u[b]}};
            }
        }

        // every level set below the height is somebody's exact fingerprint
        for (std::uint32_t mask = 0; mask < (1u << ht); ++mask) {
            std::vector<std::uint32_t> want;
            for (std::uint32_t b = 0; b < ht; ++b)
                if (mask >> b & 1u) want.push_back(b);
            bool found = false;
            for (gen_index j : u)
                if (p->fingerprint(j) == want) {
                    found = true;
                    break;
                }
            if (!found)
                return {{"law", "every level set is realized"}, {"levels", num_list(want)}};
        }

        // extension laws over the derived component pairs
        for (const auto& c : all_components(p)) {
            if (!leq(*c, *p))
                return {{"law", "components extend"}, {"component", condition_id(*c)}};
            if (c->height() > ht ||
                !std::includes(u.begin(), u.end(), c->support().begin(), c->support().end()))
                return {{"law", "height and support grow"}, {"component", condition_id(*c)}};
            if (!is_subalgebra_embedding(c->table(), p->table()))
                return {{"law", "rows restrict exactly"}, {"component", condition_id(*c)}};
            if (c->height() == ht && !leq(*p, *c))
                return {{"law", "equal heights are two-sided"}, {"component", condition_id(*c)}};
        }

        // the official spine interpolates pure extension height by height
        std::vector<condition_ptr> spine;
        for (std::uint32_t a = 0; a <= ht; ++a) spine.push_back(pr_component(p, a));
        if (!spine[ht]->equals(*p))
            return {{"law", "spine tops out"}};
        for (std::uint32_t a = 0; a <= ht; ++a) {
            if (spine[a]->height() != a)
                return {{"law", "spine heights"}, {"alpha", a}};
            for (std::uint32_t b = a; b <= ht; ++b)
                if (!leq_pr(*spine[a], *spine[b]))
                    return {{"law", "spine is pure"}, {"alpha", a}, {"beta", b}};
        }
        return ordered_json();
    });
}

check_report check_iso_transport(const condition_ptr& p) {
    return guarded("iso_transport", p, [&]() -> ordered_json {
        // parts of every amalgam constituent are isomorphic copies over the heart
        for (const auto& q : all_components(p)) {
            if (!q->is_amalgam()) continue;
            for (std::uint32_t i = 0; i < q->width(); ++i) {
                for (std::uint32_t j = i + 1; j < q->width(); ++j) {
                    const condition& a = *q->part_child(i);
                    const condition& b = *q->part_child(j);
                    auto h = iso_map(a, b);
                    if (!h)
                        return {{"law", "parts isomorphic"},
                                {"component", condition_id(*q)},
                                {"i", i},
                                {"j", j}};
                    for (gen_index x : q->heart())
                        if (h->map(x) != x)
                            return {{"law", "heart fixed"}, {"component", condition_id(*q)}, {"x", x}};
                    const auto& vi = q->parts()[i].v;
                    const auto& vj = q->parts()[j].v;
                    for (std::size_t k = 0; k < vi.size(); ++k)
                        if (h->map(vi[k]) != vj[k])
                            return {{"law", "v transported"},
                                    {"component", condition_id(*q)},
                                    {"i", i},
                                    {"j", j}};
                    auto ra = a.table().rows();
                    auto rb = b.table().rows();
                    std::sort(ra.begin(), ra.end());
                    std::sort(rb.begin(), rb.end());
                    if (ra != rb)
                        return {{"law", "rows transport"},
                                {"component", condition_id(*q)},
                                {"i", i},
                                {"j", j}};
                }
            }
        }

        // relabeling is an isomorphism with all derived structure transported
        const order_map h = shifted(*p, 101);
        condition_ptr q2 = relabel(p, h);
        auto found = iso_map(*p, *q2);
        if (!found || !(*found == h))
            return {{"law", "relabel is the isomorphism"}};
        for (gen_index j : p->support()) {
            for (std::uint32_t b = 0; b < p->height(); ++b) {
                if (!(p->history(j, b) == q2->history(h.map(j), b)))
                    return {{"law", "history invariant"}, {"j", j}, {"level", b}};
                if (!(p->tag(j, b) == q2->tag(h.map(j), b)))
                    return {{"law", "tag invariant"}, {"j", j}, {"level", b}};
            }
        }
        if (p->is_amalgam() &&
            (q2->zeta_star() != p->zeta_star() || !q2->tau_star()->equals(*p->tau_star()) ||
             q2->n_star() != p->n_star()))
            return {{"law", "shape invariant"}};
        if (!relabel(q2, order_map::between(q2->support(), p->support()))->equals(*p))
            return {{"law", "relabel roundtrip"}};

        // predecessors transport along the isomorphism
        for (const auto& c : all_components(p)) {
            condition_ptr expect = relabel(c, restrict_map(h, c->support()));
            condition_ptr got = transport(h, c, *p, *q2);
            if (!got->equals(*expect))
                return {{"law", "transport"}, {"component", condition_id(*c)}};
            if (!leq(*got, *q2))
                return {{"law", "transport extends"}, {"component", condition_id(*c)}};
        }
        return ordered_json();
    });
}

check_report check_transform_contract(const condition_ptr& p) {
    return guarded("transform_contract", p, [&]() -> ordered_json {
        const std::uint32_t ht = p->height();
        std::vector<condition_ptr> spine;
        for (std::uint32_t a = 0; a <= ht; ++a) spine.push_back(pr_component(p, a));
        const order_map h = shifted(*p, 101);
        condition_ptr q2 = relabel(p, h);

        for (const auto& c : all_components(p)) {
            condition_ptr r = transform(c, p);
            if (r->support() != p->support() || r->height() != ht)
                return {{"law", "support and height kept"}, {"component", condition_id(*c)}};
            if (!leq_pr(*c, *r))
                return {{"law", "pure extension of the seed"}, {"component", condition_id(*c)}};
            if (!leq(*r, *p) || !leq(*p, *r))
                return {{"law", "extension-equivalent"}, {"component", condition_id(*c)}};
            if (c->height() == ht && !r->equals(*c))
                return {{"law", "equal heights collapse"}, {"component", condition_id(*c)}};
            condition_ptr c2 = relabel(c, restrict_map(h, c->support()));
            if (!relabel(r, h)->equals(*transform(c2, q2)))
                return {{"law", "commutes with relabeling"}, {"component", condition_id(*c)}};
            // monotone along the official spine
            condition_ptr prev;
            for (std::uint32_t b = c->height(); b <= ht; ++b) {
                if (!leq(*c, *spine[b])) continue;
                condition_ptr rb = transform(c, spine[b]);
                if (prev && !leq_pr(*prev, *rb))
                    return {{"law", "monotone along the spine"},
                            {"component", condition_id(*c)},
                            {"beta", b}};
                prev = std::move(rb);
            }
        }
        return ordered_json();
    });
}

check_report check_components(const condition_ptr& p) {
    return guarded("components", p, [&]() -> ordered_json {
        const std::uint32_t ht = p->height();
        const history_value theta = history_value::theta();
        const order_map h = shifted(*p, 101);
        condition_ptr q2 = relabel(p, h);

        for (std::uint32_t alpha = 0; alpha <= ht; ++alpha) {
            std::vector<condition_ptr> comps = components(p, alpha);
            if (comps.empty())
                return {{"law", "components exist"}, {"alpha", alpha}};
            for (const auto& c : comps) {
                if (c->height() != alpha)
                    return {{"law", "component height"}, {"alpha", alpha}};
                if (!leq(*c, *p))
                    return {{"law", "component extends"}, {"alpha", alpha}};
                // at and above alpha, non-theta history values agree inside c
                for (std::uint32_t beta = alpha; beta < ht; ++beta) {
                    std::optional<history_value> seen;
                    for (gen_index j : c->support()) {
                        history_value v = p->history(j, beta);
                        if (v == theta) continue;
                        if (seen && !(*seen == v))
                            return {{"law", "coherent above"}, {"alpha", alpha}, {"level", beta}};
                        seen = v;
                    }
                }
            }
            for (std::size_t i = 0; i < comps.size(); ++i) {
                for (std::size_t j = i + 1; j < comps.size(); ++j) {
                    if (comps[i]->support() == comps[j]->support())
                        return {{"law", "components distinct"}, {"alpha", alpha}};
                    if (!iso_map(*comps[i], *comps[j]))
                        return {{"law", "components isomorphic"}, {"alpha", alpha}, {"i", i}, {"j", j}};
                }
            }
            // every generator lies in exactly one dominating component
            for (gen_index i : p->support()) {
                std::size_t hits = 0;
                for (const auto& c : comps) {
                    if (!std::binary_search(c->support().begin(), c->support().end(), i)) continue;
                    bool dom = true;
                    for (std::uint32_t beta = alpha; beta < ht && dom; ++beta) {
                        if (p->history(i, beta).is_index()) continue;
                        for (gen_index j : c->support())
                            if (p->history(j, beta).is_index()) {
                                dom = false;
                                break;
                            }
                    }
                    if (dom) ++hits;
                }
                if (hits != 1)
                    return {{"law", "unique dominating component"},
                            {"alpha", alpha},
                            {"i", i},
                            {"count", hits}};
            }
            // exactly one pure component, and pr_component finds it
            condition_ptr pc = pr_component(p, alpha);
            std::size_t pure = 0;
            bool matched = false;
            for (const auto& c : comps)
                if (leq_pr(*c, *p)) {
                    ++pure;
                    matched = matched || c->equals(*pc);
                }
            if (pure != 1 || !matched)
                return {{"law", "unique pure component"}, {"alpha", alpha}, {"count", pure}};
            // component lists transport along relabeling, order preserved
            std::vector<condition_ptr> comps2 = components(q2, alpha);
            if (comps2.size() != comps.size())
                return {{"law", "invariant under relabeling"}, {"alpha", alpha}};
            for (std::size_t i = 0; i < comps.size(); ++i)
                if (!comps2[i]->equals(*relabel(comps[i], restrict_map(h, comps[i]->support()))))
                    return {{"law", "invariant under relabeling"}, {"alpha", alpha}, {"i", i}};
        }
        return ordered_json();
    });
}

check_report check_closed_sets(const condition_ptr& p) {
    return guarded("closed_sets", p, [&]() -> ordered_json {
        const std::uint32_t ht = p->height();
        auto subsets = level_subsets(ht);
        std::vector<std::vector<std::uint32_t>> family;
        for (const auto& z : subsets)
            if (is_p_closed(p, z)) family.push_back(z);

        if (family.empty() || !family.front().empty())
            return {{"law", "empty set closed"}};
        std::vector<std::uint32_t> full;
        for (std::uint32_t b = 0; b < ht; ++b) full.push_back(b);
        if (!is_p_closed(p, full))
            return {{"law", "full set closed"}};

        for (const auto& w : subsets) {
            std::vector<std::uint32_t> z = close(p, w);
            if (!is_p_closed(p, z) || !std::includes(z.begin(), z.end(), w.begin(), w.end()))
                return {{"law", "close yields a closed superset"}, {"levels", num_list(w)}};
            for (const auto& z2 : family)
                if (std::includes(z2.begin(), z2.end(), w.begin(), w.end()) &&
                    !std::includes(z2.begin(), z2.end(), z.begin(), z.end()))
                    return {{"law", "close is least"}, {"levels", num_list(w)}};
            if (close(p, z) != z)
                return {{"law", "close idempotent"}, {"levels", num_list(w)}};
        }

        const order_map h = shifted(*p, 101);
        condition_ptr q2 = relabel(p, h);
        for (const auto& z : subsets)
            if (is_p_closed(p, z) != is_p_closed(q2, z))
                return {{"law", "invariant under relabeling"}, {"levels", num_list(z)}};

        for (const auto& z : family) {
            for (std::uint32_t alpha = 0; alpha <= ht; ++alpha) {
                std::vector<std::uint32_t> cut;
                for (std::uint32_t b : z)
                    if (b < alpha) cut.push_back(b);
                for (const auto& c : components(p, alpha))
                    if (!is_p_closed(c, cut))
                        return {{"law", "restricts to components"},
                                {"levels", num_list(z)},
                                {"alpha", alpha}};
            }
        }

        for (const auto& z : family) {
            std::vector<gen_index> us = u_set(p, z);
            std::vector<gen_index> direct;
            for (gen_index j : p->support()) {
                auto fp = p->fingerprint(j);
                if (std::includes(z.begin(), z.end(), fp.begin(), fp.end())) direct.push_back(j);
            }
            if (us != direct)
                return {{"law", "u_set is the fingerprint filter"}, {"levels", num_list(z)}};
            std::uint32_t amax = z.empty() ? 0 : z.back() + 1;
            const auto& psup = pr_component(p, amax)->support();
            if (!std::includes(psup.begin(), psup.end(), us.begin(), us.end()))
                return {{"law", "u_set sits in the pure component"}, {"levels", num_list(z)}};
        }
        return ordered_json();
    });
}

check_report check_upsilon_welldefined(const condition_ptr& p) {
    return guarded("upsilon_welldefined", p, [&]() -> ordered_json {
        const order_map h = shifted(*p, 101);
        condition_ptr q2 = relabel(p, h);
        for (const auto& z : closed_family(p)) {
            upsilon_signature sig;
            try {
                sig = upsilon(p, z);
            } catch (const internal_error& e) {
                return {{"law", "entries well defined"}, {"levels", num_list(z)}, {"error", e.what()}};
            }
            if (sig.entries.size() != z.size())
                return {{"law", "one entry per level"}, {"levels", num_list(z)}};
            for (std::size_t l = 0; l < sig.entries.size(); ++l) {
                const upsilon_entry& e = sig.entries[l];
                bool shape = e.zeta < p->width() && e.tau && e.n == e.tau->arity() &&
                             e.g.size() == l && e.h.size() == e.n;
                for (const auto& hv : e.h) shape = shape && hv.size() == l;
                if (!shape)
                    return {{"law", "entry bookkeeping"}, {"levels", num_list(z)}, {"entry", l}};
            }
            if (!(upsilon(q2, z) == sig))
                return {{"law", "invariant under relabeling"}, {"levels", num_list(z)}};
        }
        return ordered_json();
    });
}

check_report check_signature_order_iso(const condition_ptr& p) {
    return guarded("signature_order_iso", p, [&]() -> ordered_json {
        auto family = closed_family(p);
        std::vector<upsilon_signature> sigs;
        sigs.reserve(family.size());
        for (const auto& z : family) sigs.push_back(upsilon(p, z));

        for (std::size_t i0 = 0; i0 < family.size(); ++i0) {
            for (std::size_t i1 = 0; i1 < family.size(); ++i1) {
                const auto& z0 = family[i0];
                const auto& z1 = family[i1];
                if (z0.size() != z1.size()) continue;
                if (!(sigs[i0] == sigs[i1])) {
                    bool rejected = false;
                    try {
                        (void)u_iso(p, z0, z1);
                    } catch (const invalid_input&) {
                        rejected = true;
                    }
                    if (!rejected)
                        return {{"law", "unequal signatures are rejected"},
                                {"z0", num_list(z0)},
                                {"z1", num_list(z1)}};
                    continue;
                }
                order_map pi = u_iso(p, z0, z1);
                std::vector<gen_index> u0 = u_set(p, z0);
                std::vector<gen_index> u1 = u_set(p, z1);
                if (pi.from != u0 || pi.to != u1)
                    return {{"law", "map covers the U-sets"}, {"z0", num_list(z0)}, {"z1", num_list(z1)}};
                for (std::size_t pos = 0; pos < u0.size(); ++pos)
                    for (std::size_t l = 0; l < z0.size(); ++l)
                        if (!(p->history(u0[pos], z0[l]) == p->history(u1[pos], z1[l])))
                            return {{"law", "histories transport"},
                                    {"z0", num_list(z0)},
                                    {"z1", num_list(z1)},
                                    {"position", pos},
                                    {"entry", l}};
                if (level_map_fixes_overlap(z0, z1)) {
                    for (gen_index j : u0)
                        if (std::binary_search(u1.begin(), u1.end(), j) && pi.map(j) != j)
                            return {{"law", "fixes the overlap"},
                                    {"z0", num_list(z0)},
                                    {"z1", num_list(z1)},
                                    {"j", j}};
                }
                if (!(u_iso(p, z1, z0) == order_map::between(pi.to, pi.from)))
                    return {{"law", "inverse symmetry"}, {"z0", num_list(z0)}, {"z1", num_list(z1)}};
            }
        }
        return ordered_json();
    });
}

check_report check_generator_independence(const condition_ptr& p) {
    return guarded("generator_independence", p, [&]() -> ordered_json {
        const auto& tbl = p->table();
        const auto& u = p->support();
        for (gen_index j : u) {
            std::vector<gen_index> prefix;
            for (gen_index i : u) {
                if (i >= j) break;
                prefix.push_back(i);
            }
            auto w = generated_witness(tbl, j, prefix);
            if (!w)
                return {{"law", "not generated by predecessors"}, {"j", j}};
            if (in_generated(tbl, j, prefix))
                return {{"law", "oracles agree"}, {"j", j}};
            // the witness itself: two rows agreeing on the prefix, split at j
            auto [r0, r1] = *w;
            std::size_t pj = *tbl.position(j);
            if (tbl.row_bit(r0, pj) == tbl.row_bit(r1, pj))
                return {{"law", "witness separates"}, {"j", j}};
            for (gen_index i : prefix) {
                std::size_t pi = *tbl.position(i);
                if (tbl.row_bit(r0, pi) != tbl.row_bit(r1, pi))
                    return {{"law", "witness agrees on the prefix"}, {"j", j}, {"i", i}};
            }
        }
        return ordered_json();
    });
}

std::vector<term_instance> build_maj_chain(const condition_ptr& q) {
    if (!q) throw invalid_input("majority chain: null condition");
    if (q->is_atomic()) throw invalid_input("majority chain: needs an amalgam");
    const std::uint32_t n = q->n_star();
    std::vector<term_instance> out;
    for (std::uint32_t t3 = 0; 3 * t3 + 2 < q->width(); ++t3) {
        std::vector<gen_index> args;
        for (std::uint32_t r = 0; r < 3; ++r)
            for (gen_index j : q->parts()[3 * t3 + r].v) args.push_back(j);
        std::sort(args.begin(), args.end());
        args.erase(std::unique(args.begin(), args.end()), args.end());
        std::vector<term_ptr> lifted;
        lifted.reserve(3);
        for (std::uint32_t r = 0; r < 3; ++r) {
            const auto& v = q->parts()[3 * t3 + r].v;
            std::vector<term_ptr> repl;
            repl.reserve(n);
            for (std::uint32_t k = 0; k < n; ++k) {
                auto it = std::lower_bound(args.begin(), args.end(), v[k]);
                repl.push_back(term::var(std::uint32_t(it - args.begin())));
            }
            lifted.push_back(substitute(q->tau_star(), repl));
        }
        term_ptr m = substitute(sigma_maj(), lifted);
        args.resize(m->arity()); // drop unreferenced trailing args (term with unused slots)
        out.push_back(make_instance(std::move(m), std::move(args)));
    }
    return out;
}

check_report check_majority_chain(const condition_ptr& p) {
    return guarded("majority_chain", p, [&]() -> ordered_json {
        if (p->is_atomic()) return ordered_json();
        const std::uint32_t k = p->width() / 3;
        std::vector<term_instance> chain = build_maj_chain(p);
        if (chain.size() != k)
            return {{"law", "chain length"}, {"got", chain.size()}};
        const auto& tbl = p->table();
        for (std::size_t i = 0; i + 1 < chain.size(); ++i)
            if (!elem_le(tbl, chain[i], chain[i + 1]))
                return {{"law", "non-strictly increasing"}, {"i", i}};
        // gate: every part term is heart-independent inside its part
        bool gate = true;
        for (std::uint32_t xi = 0; xi < 3 * k && gate; ++xi) {
            term_instance inst = make_instance(p->tau_star(), p->parts()[xi].v);
            gate = instance_generated_witness(p->part_child(xi)->table(), inst, p->heart())
                       .has_value();
        }
        if (gate) {
            chain_result res = longest_chain(tbl, chain);
            if (res.length != k)
                return {{"law", "strict length under the gate"}, {"expected", k}, {"got", res.length}};
            for (std::size_t i = 0; i + 1 < chain.size(); ++i)
                if (!elem_lt(tbl, chain[i], chain[i + 1]))
                    return {{"law", "strictly increasing under the gate"}, {"i", i}};
        }
        return ordered_json();
    });
}

check_report check_flip_closure(const condition_ptr& p, const check_budget& budget) {
    return guarded("flip_closure", p, [&]() -> ordered_json {
        auto family = closed_family(p);
        std::vector<upsilon_signature> sigs;
        sigs.reserve(family.size());
        for (const auto& z : family) sigs.push_back(upsilon(p, z));
        struct zpair {
            std::size_t i0, i1;
        };
        std::vector<zpair> admissible;
        for (std::size_t i0 = 0; i0 < family.size(); ++i0)
            for (std::size_t i1 = 0; i1 < family.size(); ++i1)
                if (family[i0].size() == family[i1].size() && sigs[i0] == sigs[i1] &&
                    level_map_fixes_overlap(family[i0], family[i1]))
                    admissible.push_back({i0, i1});

        const auto& tbl = p->table();
        const std::size_t rows = tbl.row_count();
        auto probe = [&](const zpair& pr, std::size_t row) -> std::optional<ordered_json> {
            assignment f = tbl.row_assignment(row);
            assignment g = flip(p, family[pr.i0], family[pr.i1], f);
            if (tbl.has_row(g.bits)) return std::nullopt;
            return ordered_json{{"law", "flips stay in the table"},
                                {"z0", num_list(family[pr.i0])},
                                {"z1", num_list(family[pr.i1])},
                                {"row", row}};
        };
        if (admissible.size() * rows <= budget.max_exhaustive) {
            for (const auto& pr : admissible)
                for (std::size_t row = 0; row < rows; ++row)
                    if (auto bad = probe(pr, row)) return *bad;
        } else {
            splitmix64 rng(budget.seed ^ 0x666c697001ull);
            for (std::size_t s = 0; s < budget.samples; ++s) {
                const zpair& pr = admissible[rng.draw(admissible.size())];
                if (auto bad = probe(pr, rng.draw(rows))) {
                    (*bad)["seed"] = budget.seed;
                    return *bad;
                }
            }
        }
        return ordered_json();
    });
}

check_report check_chain_collapse(const condition_ptr& p, const term_ptr& tau,
                                  const std::vector<gen_index>& w0,
                                  const std::vector<gen_index>& w1,
                                  const std::vector<std::uint32_t>& z0,
                                  const std::vector<std::uint32_t>& z1) {
    stopwatch sw;
    if (!p) throw invalid_input("chain collapse: null condition");
    if (!tau) throw invalid_input("chain collapse: null term");
    term_instance a = make_instance(tau, w0);
    term_instance b = make_instance(tau, w1);
    if (!is_p_closed(p, z0)) throw invalid_input("chain collapse (pre): Z0 is not closed");
    if (!is_p_closed(p, z1)) throw invalid_input("chain collapse (pre): Z1 is not closed");
    std::vector<gen_index> u0 = u_set(p, z0);
    std::vector<gen_index> u1 = u_set(p, z1);
    if (!std::includes(u0.begin(), u0.end(), w0.begin(), w0.end()))
        throw invalid_input("chain collapse (pre): Z0 does not cover the fingerprints of w0");
    if (!std::includes(u1.begin(), u1.end(), w1.begin(), w1.end()))
        throw invalid_input("chain collapse (pre): Z1 does not cover the fingerprints of w1");
    if (z0.size() != z1.size() || !(upsilon(p, z0) == upsilon(p, z1)))
        throw invalid_input(
            "chain collapse (i): the closed sets must have equal size and equal signature");
    if (!level_map_fixes_overlap(z0, z1))
        throw invalid_input("chain collapse (ii): the level map must fix the common levels");
    order_map pi = u_iso(p, z0, z1);
    for (std::size_t k = 0; k < w0.size(); ++k)
        if (pi.map(w0[k]) != w1[k])
            throw invalid_input("chain collapse (iii): the U-map must carry w0 onto w1");

    ordered_json cex;
    if (elem_lt(p->table(), a, b))
        cex = ordered_json{{"law", "no strict increase across the flip"},
                           {"tau", tau->to_string()},
                           {"w0", num_list(w0)},
                           {"w1", num_list(w1)},
                           {"z0", num_list(z0)},
                           {"z1", num_list(z1)}};
    return finish("chain_collapse", *p, sw, std::move(cex));
}

check_report check_chain_collapse_sweep(const condition_ptr& p, const check_budget& budget) {
    return guarded("chain_collapse", p, [&]() -> ordered_json {
        auto family = closed_family(p);
        std::vector<upsilon_signature> sigs;
        std::vector<std::vector<gen_index>> usets;
        for (const auto& z : family) {
            sigs.push_back(upsilon(p, z));
            usets.push_back(u_set(p, z));
        }
        struct adm {
            std::size_t i0, i1;
            order_map pi;
        };
        std::vector<adm> pairs;
        for (std::size_t i0 = 0; i0 < family.size(); ++i0)
            for (std::size_t i1 = 0; i1 < family.size(); ++i1)
                if (family[i0].size() == family[i1].size() && sigs[i0] == sigs[i1] &&
                    level_map_fixes_overlap(family[i0], family[i1]))
                    pairs.push_back({i0, i1, u_iso(p, family[i0], family[i1])});
        std::vector<term_ptr> pool = term_pool(generator_spec::pool_kind::mixed);
        const auto& tbl = p->table();

        auto probe = [&](const adm& a, const term_ptr& tau, const std::vector<gen_index>& w0)
            -> std::optional<ordered_json> {
            std::vector<gen_index> w1;
            w1.reserve(w0.size());
            for (gen_index j : w0) w1.push_back(a.pi.map(j));
            if (!elem_lt(tbl, make_instance(tau, w0), make_instance(tau, w1))) return std::nullopt;
            return ordered_json{{"law", "no strict increase across the flip"},
                                {"tau", tau->to_string()},
                                {"w0", num_list(w0)},
                                {"w1", num_list(w1)},
                                {"z0", num_list(family[a.i0])},
                                {"z1", num_list(family[a.i1])}};
        };

        auto choose = [](std::size_t n, std::size_t k) -> std::size_t {
            if (k > n) return 0;
            std::size_t r = 1;
            for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
            return r;
        };
        std::size_t total = 0;
        for (const auto& a : pairs)
            for (const auto& tau : pool) total += choose(usets[a.i0].size(), tau->arity());

        if (total <= budget.max_exhaustive) {
            for (const auto& a : pairs) {
                const auto& u0 = usets[a.i0];
                for (const auto& tau : pool) {
                    const std::size_t n = tau->arity();
                    if (n > u0.size()) continue;
                    std::vector<std::size_t> idx(n);
                    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
                    while (true) {
                        std::vector<gen_index> w0;
                        w0.reserve(n);
                        for (std::size_t i : idx) w0.push_back(u0[i]);
                        if (auto bad = probe(a, tau, w0)) return *bad;
                        std::size_t i = n;
                        while (i > 0 && idx[i - 1] == u0.size() - n + (i - 1)) --i;
                        if (i == 0) break;
                        ++idx[i - 1];
                        for (std::size_t j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
                    }
                }
            }
        } else {
            splitmix64 rng(budget.seed ^ 0x636f6c6c61707301ull);
            for (std::size_t s = 0; s < budget.samples; ++s) {
                const adm& a = pairs[rng.draw(pairs.size())];
                const auto& u0 = usets[a.i0];
                const term_ptr& tau = pool[rng.draw(pool.size())];
                const std::size_t n = tau->arity();
                if (n > u0.size()) continue;
                std::vector<std::size_t> picked;
                picked.reserve(n);
                for (std::size_t i = u0.size() - n; i < u0.size(); ++i) {
                    std::size_t r = std::size_t(rng.draw(i + 1));
                    bool dup = std::find(picked.begin(), picked.end(), r) != picked.end();
                    picked.push_back(dup ? i : r);
                }
                std::sort(picked.begin(), picked.end());
                std::vector<gen_index> w0;
                w0.reserve(n);
                for (std::size_t i : picked) w0.push_back(u0[i]);
                if (auto bad = probe(a, tau, w0)) {
                    (*bad)["seed"] = budget.seed;
                    return *bad;
                }
            }
        }
        return ordered_json();
    });
}

check_report check_serialization_roundtrip(const condition_ptr& p) {
    return guarded("serialization_roundtrip", p, [&]() -> ordered_json {
        std::string s = encode_string(*p);
        condition_ptr q = decode_string(s);
        if (!q->equals(*p))
            return {{"law", "decode rebuilds the condition"}};
        if (!(q->table() == p->table()))
            return {{"law", "derived table agrees"}};
        for (gen_index j : p->support())
            for (std::uint32_t b = 0; b < p->height(); ++b)
                if (!(q->history(j, b) == p->history(j, b)) || !(q->tag(j, b) == p->tag(j, b)))
                    return {{"law", "derived histories agree"}, {"j", j}, {"level", b}};
        if (encode_string(*q) != s)
            return {{"law", "encoding is canonical"}};
        if (condition_id(*q) != condition_id(*p))
            return {{"law", "id is stable"}};
        return ordered_json();
    });
}

std::vector<check_report> run_suite(const condition_ptr& p, const check_budget& budget) {
    if (!p) throw invalid_input("suite: null condition");
    std::vector<check_report> out;
    out.reserve(13);
    out.push_back(check_clauses(p, budget));
    out.push_back(check_history_invariants(p));
    out.push_back(check_iso_transport(p));
    out.push_back(check_transform_contract(p));
    out.push_back(check_components(p));
    out.push_back(check_closed_sets(p));
    out.push_back(check_upsilon_welldefined(p));
    out.push_back(check_signature_order_iso(p));
    out.push_back(check_generator_independence(p));
    out.push_back(check_majority_chain(p));
    out.push_back(check_flip_closure(p, budget));
    out.push_back(check_chain_collapse_sweep(p, budget));
    out.push_back(check_serialization_roundtrip(p));
    return out;
}

} // namespace histforce
