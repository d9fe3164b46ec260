#include "histforce/signatures.hpp"

#include <algorithm>
#include <string>

#include "histforce/errors.hpp"

namespace histforce {

namespace {

void collect_components(const condition_ptr& c, std::uint32_t alpha,
                        std::vector<condition_ptr>& out) {
    if (c->height() == alpha) {
        for (const auto& seen : out)
            if (seen->equals(*c)) return;
        out.push_back(c);
        return;
    }
    for (const auto& pt : c->parts()) collect_components(pt.child, alpha, out);
}

std::uint64_t levels_mask(const condition& p, const std::vector<std::uint32_t>& levels,
                          const char* what) {
    std::uint64_t mask = 0;
    std::uint32_t prev = 0;
    bool first = true;
    for (std::uint32_t lv : levels) {
        if (!first && lv <= prev)
            throw invalid_input(std::string(what) + ": levels must be sorted and distinct");
        if (lv >= p.height())
            throw invalid_input(std::string(what) + ": level " + std::to_string(lv) +
                                " not below height " + std::to_string(p.height()));
        mask |= std::uint64_t(1) << lv;
        prev = lv;
        first = false;
    }
    return mask;
}

// Levels where the official v-elements or the official block's minimum of
// this amalgam entered through a part (read inside the official part).
std::uint64_t spine_demand(const condition& c) {
    const condition& official = *c.part_child(c.zeta_star());
    std::vector<gen_index> probes = c.parts()[c.zeta_star()].v;
    const gen_index min_block = c.block(c.zeta_star()).front();
    if (!std::binary_search(probes.begin(), probes.end(), min_block))
        probes.push_back(min_block);
    std::uint64_t mask = 0;
    for (gen_index j : probes)
        for (std::uint32_t beta : official.fingerprint(j)) mask |= std::uint64_t(1) << beta;
    return mask;
}

bool closed_mask(const condition& c, std::uint64_t zmask) {
    if (c.is_atomic()) return true;
    const std::uint32_t alpha = c.height() - 1;
    if (!closed_mask(*c.part_child(c.zeta_star()), zmask)) return false;
    if ((zmask >> alpha) & 1)
        if (spine_demand(c) & ~zmask) return false;
    return true;
}

std::uint64_t require_closed(const condition_ptr& p, const std::vector<std::uint32_t>& levels,
                             const char* what) {
    const std::uint64_t mask = levels_mask(*p, levels, what);
    if (!closed_mask(*p, mask))
        throw invalid_input(std::string(what) + ": level set is not closed for the condition");
    return mask;
}

std::vector<std::uint32_t> mask_to_levels(std::uint64_t mask) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t lv = 0; lv < 64; ++lv)
        if ((mask >> lv) & 1) out.push_back(lv);
    return out;
}

} // namespace

std::vector<condition_ptr> components(const condition_ptr& p, std::uint32_t alpha) {
    if (!p) throw invalid_input("components: null condition");
    if (alpha > p->height()) throw invalid_input("components: level above the height");
    std::vector<condition_ptr> out;
    collect_components(p, alpha, out);
    return out;
}

condition_ptr pr_component(const condition_ptr& p, std::uint32_t alpha) {
    if (!p) throw invalid_input("pr_component: null condition");
    if (alpha > p->height()) throw invalid_input("pr_component: level above the height");
    condition_ptr c = p;
    while (c->height() > alpha) c = c->part_child(c->zeta_star());
    return c;
}

bool is_p_closed(const condition_ptr& p, const std::vector<std::uint32_t>& levels) {
    if (!p) throw invalid_input("is_p_closed: null condition");
    return closed_mask(*p, levels_mask(*p, levels, "is_p_closed"));
}

std::vector<std::uint32_t> close(const condition_ptr& p, const std::vector<std::uint32_t>& levels) {
    if (!p) throw invalid_input("close: null condition");
    std::uint64_t z = levels_mask(*p, levels, "close");
    // demands per level along the official spine; the demand of level alpha
    // lives in the spine condition of height alpha+1
    std::vector<std::uint64_t> demand(p->height(), 0);
    for (condition_ptr c = p; c->is_amalgam(); c = c->part_child(c->zeta_star()))
        demand[c->height() - 1] = spine_demand(*c);
    // each demanded level is strictly below its demander, so height-many
    // passes reach the fixpoint
    for (std::uint32_t pass = 0; pass < p->height() + 1; ++pass) {
        std::uint64_t grown = z;
        for (std::uint32_t lv = 0; lv < p->height(); ++lv)
            if ((z >> lv) & 1) grown |= demand[lv];
        if (grown == z) break;
        z = grown;
    }
    if (!closed_mask(*p, z)) throw internal_error("close: fixpoint is not closed");
    return mask_to_levels(z);
}

std::vector<gen_index> u_set(const condition_ptr& p, const std::vector<std::uint32_t>& levels) {
    if (!p) throw invalid_input("u_set: null condition");
    const std::uint64_t z = require_closed(p, levels, "u_set");
    std::vector<gen_index> out;
    for (gen_index j : p->support()) {
        bool inside = true;
        for (std::uint32_t beta : p->fingerprint(j))
            if (!((z >> beta) & 1)) {
                inside = false;
                break;
            }
        if (inside) out.push_back(j);
    }
    return out;
}

namespace {

// One signature entry read from a concrete component one level above
// levels[ell], using the v-set of part xi.
upsilon_entry entry_from(const condition& q, const std::vector<std::uint32_t>& levels,
                         std::size_t ell, std::uint32_t xi) {
    upsilon_entry e;
    e.zeta = q.zeta_star();
    e.tau = q.tau_star();
    e.n = q.n_star();
    const auto& v = q.parts()[xi].v;
    e.h.resize(e.n);
    for (std::uint32_t m = 0; m < e.n; ++m) {
        e.h[m].reserve(ell);
        for (std::size_t lp = 0; lp < ell; ++lp) e.h[m].push_back(q.history(v[m], levels[lp]));
    }
    const gen_index i0 = q.block(q.zeta_star()).front();
    e.g.reserve(ell);
    for (std::size_t lp = 0; lp < ell; ++lp) e.g.push_back(q.history(i0, levels[lp]));
    return e;
}

} // namespace

upsilon_signature upsilon(const condition_ptr& p, const std::vector<std::uint32_t>& levels) {
    if (!p) throw invalid_input("upsilon: null condition");
    require_closed(p, levels, "upsilon");
    upsilon_signature sig;
    sig.entries.reserve(levels.size());
    for (std::size_t ell = 0; ell < levels.size(); ++ell) {
        const condition_ptr primary = pr_component(p, levels[ell] + 1);
        upsilon_entry e = entry_from(*primary, levels, ell, primary->zeta_star());
        // well-definedness: the entry must not depend on the v-set chosen ...
        const std::uint32_t other_xi = (primary->zeta_star() + 1) % primary->width();
        if (!(entry_from(*primary, levels, ell, other_xi) == e))
            throw internal_error("upsilon: entry depends on the part whose v-set is read");
        // ... nor on the component
        for (const auto& comp : components(p, levels[ell] + 1)) {
            if (comp->equals(*primary)) continue;
            if (!(entry_from(*comp, levels, ell, comp->zeta_star()) == e))
                throw internal_error("upsilon: entry differs between components");
            break; // one sibling suffices as the cross-check
        }
        sig.entries.push_back(std::move(e));
    }
    return sig;
}

namespace {

// Does the positionwise level map z0 -> z1 fix every common level?
bool aligned_on_overlap(const std::vector<std::uint32_t>& z0,
                        const std::vector<std::uint32_t>& z1) {
    for (std::size_t i = 0; i < z0.size(); ++i) {
        const auto it = std::lower_bound(z1.begin(), z1.end(), z0[i]);
        if (it != z1.end() && *it == z0[i] && std::size_t(it - z1.begin()) != i) return false;
    }
    return true;
}

} // namespace

order_map u_iso(const condition_ptr& p, const std::vector<std::uint32_t>& z0,
                const std::vector<std::uint32_t>& z1) {
    if (!p) throw invalid_input("u_iso: null condition");
    require_closed(p, z0, "u_iso");
    require_closed(p, z1, "u_iso");
    if (z0.size() != z1.size()) throw invalid_input("u_iso: level sets differ in size");
    if (!(upsilon(p, z0) == upsilon(p, z1))) throw invalid_input("u_iso: signatures differ");

    const std::vector<gen_index> u0 = u_set(p, z0);
    const std::vector<gen_index> u1 = u_set(p, z1);
    if (u0.size() != u1.size())
        throw internal_error("u_iso: equal signatures but different order types");
    order_map pi = order_map::between(u0, u1);

    // (x): the map transports histories at the closed levels, positionwise
    for (std::size_t pos = 0; pos < u0.size(); ++pos)
        for (std::size_t ell = 0; ell < z0.size(); ++ell)
            if (!(p->history(u0[pos], z0[ell]) == p->history(u1[pos], z1[ell])))
                throw internal_error("u_iso: history transport violated at generator " +
                                     std::to_string(u0[pos]) + " level " +
                                     std::to_string(z0[ell]));

    // when the level alignment fixes the common levels, the generator map
    // fixes the common generators
    if (aligned_on_overlap(z0, z1)) {
        for (gen_index j : u0)
            if (std::binary_search(u1.begin(), u1.end(), j) && pi.map(j) != j)
                throw internal_error("u_iso: not the identity on the common generators");
    }
    return pi;
}

namespace {

assignment flip_along(const condition& p, const order_map& pi, const assignment& f) {
    assignment g;
    g.domain = p.support();
    for (std::size_t pos = 0; pos < g.domain.size(); ++pos) {
        const gen_index j = g.domain[pos];
        bool bit = false;
        if (std::binary_search(pi.from.begin(), pi.from.end(), j))
            bit = f.value_at(pi.map(j));
        else if (std::binary_search(pi.to.begin(), pi.to.end(), j))
            bit = f.value_at(pi.inverse(j));
        if (bit) g.bits |= std::uint64_t(1) << pos;
    }
    return g;
}

void require_row(const condition& p, const assignment& f, const char* what) {
    if (f.domain != p.support())
        throw invalid_input(std::string(what) + ": assignment domain is not the support");
    if (!p.table().has_row(f.bits))
        throw invalid_input(std::string(what) + ": assignment is not a row of the table");
}

} // namespace

assignment flip(const condition_ptr& p, const std::vector<std::uint32_t>& z0,
                const std::vector<std::uint32_t>& z1, const assignment& f) {
    if (!p) throw invalid_input("flip: null condition");
    require_row(*p, f, "flip");
    const order_map pi = u_iso(p, z0, z1);
    return flip_along(*p, pi, f);
}

assignment flip_with_map(const condition_ptr& p, const order_map& pi, const assignment& f) {
    if (!p) throw invalid_input("flip_with_map: null condition");
    require_row(*p, f, "flip_with_map");
    for (gen_index j : pi.from)
        if (!p->table().position(j))
            throw invalid_input("flip_with_map: map domain leaves the support");
    for (gen_index j : pi.to)
        if (!p->table().position(j))
            throw invalid_input("flip_with_map: map range leaves the support");
    return flip_along(*p, pi, f);
}

} // namespace histforce
