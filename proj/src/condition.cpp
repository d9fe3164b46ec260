#include "histforce/condition.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "histforce/errors.hpp"

namespace histforce {

namespace {

// Joined-table tuple visits are capped independently of the row cap: a join
// can visit far more tuples than it keeps.
constexpr std::uint64_t kMaxJoinIterations = std::uint64_t(1) << 24;

bool sorted_unique(const std::vector<gen_index>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i - 1] >= xs[i]) return false;
    return true;
}

// Positions of subset elements inside a sorted domain; nullopt when not contained.
std::optional<std::vector<std::size_t>> try_positions(const std::vector<gen_index>& domain,
                                                      const std::vector<gen_index>& subset) {
    std::vector<std::size_t> pos;
    pos.reserve(subset.size());
    for (gen_index j : subset) {
        auto it = std::lower_bound(domain.begin(), domain.end(), j);
        if (it == domain.end() || *it != j) return std::nullopt;
        pos.push_back(std::size_t(it - domain.begin()));
    }
    return pos;
}

std::uint64_t gather(std::uint64_t bits, const std::vector<std::size_t>& pos) {
    std::uint64_t out = 0;
    for (std::size_t k = 0; k < pos.size(); ++k)
        out |= ((bits >> pos[k]) & 1) << k;
    return out;
}

} // namespace

order_map order_map::between(std::vector<gen_index> from, std::vector<gen_index> to) {
    if (from.size() != to.size()) throw invalid_input("order_map: size mismatch");
    if (!sorted_unique(from) || !sorted_unique(to))
        throw invalid_input("order_map: endpoints must be strictly increasing");
    return {std::move(from), std::move(to)};
}

order_map order_map::identity(std::vector<gen_index> support) {
    auto copy = support;
    return between(std::move(support), std::move(copy));
}

gen_index order_map::map(gen_index j) const {
    auto it = std::lower_bound(from.begin(), from.end(), j);
    if (it == from.end() || *it != j)
        throw invalid_input("order_map: " + std::to_string(j) + " not in domain");
    return to[std::size_t(it - from.begin())];
}

gen_index order_map::inverse(gen_index j) const {
    auto it = std::lower_bound(to.begin(), to.end(), j);
    if (it == to.end() || *it != j)
        throw invalid_input("order_map: " + std::to_string(j) + " not in range");
    return from[std::size_t(it - to.begin())];
}

bool order_map::contains(gen_index j) const {
    return std::binary_search(from.begin(), from.end(), j);
}

condition::condition(std::uint32_t width, gen_index index)
    : width_(width), height_(0), atom_index_(index), support_{index},
      table_({index}, {0, 1}), hist_(1), tags_(1) {}

condition::condition(std::uint32_t width, std::uint32_t zeta_star, term_ptr tau_star,
                     std::vector<gen_index> heart, std::vector<part> parts,
                     std::vector<gen_index> support, valuation_table table, std::uint32_t height,
                     std::vector<std::vector<history_value>> hist,
                     std::vector<std::vector<g_tag>> tags)
    : width_(width), height_(height), zeta_star_(zeta_star), tau_star_(std::move(tau_star)),
      heart_(std::move(heart)), parts_(std::move(parts)), support_(std::move(support)),
      table_(std::move(table)), hist_(std::move(hist)), tags_(std::move(tags)) {}

condition_ptr condition::atomic(std::uint32_t width, gen_index index) {
    if (width < 2) throw invalid_input("atomic: width must be at least 2");
    return condition_ptr(new condition(width, index));
}

namespace {

// The table of an amalgam: assignments on the joint support whose restriction
// to every part is a row of that part, filtered by monotonicity of the
// majority values across consecutive part triples.
valuation_table join_tables(const std::vector<condition::part>& parts,
                            const std::vector<gen_index>& support, std::size_t heart_size,
                            const term_ptr& tau_star) {
    const std::size_t t = parts.size();
    const std::size_t triples = t / 3;

    struct part_data {
        std::vector<std::size_t> scatter; // part position -> support position
        std::vector<std::uint8_t> val;    // per-row value of this part's term instance
        const std::vector<std::uint64_t>* rows = nullptr;
        std::map<std::uint64_t, std::vector<std::size_t>> by_key; // heart bits -> row indices
    };

    const std::uint64_t heart_mask =
        heart_size >= 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << heart_size) - 1);

    std::vector<part_data> data(t);
    for (std::size_t xi = 0; xi < t; ++xi) {
        const condition& child = *parts[xi].child;
        auto scatter = try_positions(support, child.support());
        auto vpos = try_positions(child.support(), parts[xi].v);
        if (!scatter || !vpos) throw internal_error("join: support bookkeeping out of sync");
        data[xi].scatter = std::move(*scatter);
        data[xi].rows = &child.table().rows();
        data[xi].val.reserve(data[xi].rows->size());
        for (std::uint64_t r : *data[xi].rows) {
            data[xi].val.push_back(tau_star->eval_mask(gather(r, *vpos)) ? 1 : 0);
            data[xi].by_key[r & heart_mask].push_back(data[xi].val.size() - 1);
        }
    }

    std::vector<std::uint64_t> out;
    std::uint64_t visited = 0;
    for (const auto& [key, rows0] : data[0].by_key) {
        std::vector<const std::vector<std::size_t>*> lists(t);
        lists[0] = &rows0;
        bool shared = true;
        for (std::size_t xi = 1; xi < t && shared; ++xi) {
            auto it = data[xi].by_key.find(key);
            if (it == data[xi].by_key.end()) shared = false;
            else lists[xi] = &it->second;
        }
        if (!shared) continue;

        std::vector<std::size_t> idx(t, 0);
        while (true) {
            if (++visited > kMaxJoinIterations)
                throw resource_limit("amalgamate: join exceeds the iteration cap");

            bool monotone = true;
            int prev = -1;
            for (std::size_t T = 0; T < triples && monotone; ++T) {
                int sum = 0;
                for (std::size_t d = 0; d < 3; ++d) {
                    const std::size_t xi = 3 * T + d;
                    sum += data[xi].val[(*lists[xi])[idx[xi]]];
                }
                const int m = sum >= 2 ? 1 : 0;
                if (m < prev) monotone = false;
                prev = m;
            }
            if (monotone) {
                std::uint64_t combined = 0;
                for (std::size_t xi = 0; xi < t; ++xi) {
                    const std::uint64_t r = (*data[xi].rows)[(*lists[xi])[idx[xi]]];
                    const auto& sc = data[xi].scatter;
                    for (std::size_t k = 0; k < sc.size(); ++k)
                        combined |= ((r >> k) & 1) << sc[k];
                }
                if (out.size() >= kMaxRows)
                    throw resource_limit("amalgamate: table exceeds the row cap");
                out.push_back(combined);
            }

            // advance the odometer, last part fastest
            std::size_t at = t;
            while (at > 0) {
                --at;
                if (++idx[at] < lists[at]->size()) break;
                idx[at] = 0;
                if (at == 0) { at = t + 1; break; }
            }
            if (at == t + 1) break;
        }
    }

    if (out.empty()) throw internal_error("amalgamate: joined table is empty");
    return valuation_table(support, std::move(out));
}

} // namespace

condition_ptr condition::amalgamate(std::uint32_t zeta_star, term_ptr tau_star,
                                    std::vector<gen_index> heart, std::vector<part> parts) {
    for (const auto& pt : parts)
        if (!pt.child) throw invalid_input("amalgamate: null part");
    if (parts.empty()) throw invalid_input("amalgamate: no parts");
    const std::uint32_t width = parts[0].child->width();
    if (parts.size() != width)
        throw invalid_input("amalgamate: " + std::to_string(parts.size()) + " parts for width " +
                            std::to_string(width));
    for (const auto& pt : parts)
        if (pt.child->width() != width) throw invalid_input("amalgamate: parts disagree on width");

    // clause (alpha): official index in range, term present (arity becomes n*)
    if (!tau_star) throw invalid_input("amalgamate: null term");
    if (zeta_star >= width)
        throw clause_violation("alpha", "official index " + std::to_string(zeta_star) +
                                            " not below width " + std::to_string(width));
    const std::uint32_t n_star = tau_star->arity();

    // clause (beta): one common part height; v-sets of the right shape
    const std::uint32_t child_height = parts[0].child->height();
    for (std::size_t xi = 0; xi < parts.size(); ++xi) {
        if (parts[xi].child->height() != child_height)
            throw clause_violation("beta", "part " + std::to_string(xi) + " has height " +
                                               std::to_string(parts[xi].child->height()) +
                                               ", expected " + std::to_string(child_height));
        if (!sorted_unique(parts[xi].v))
            throw invalid_input("amalgamate: v of part " + std::to_string(xi) +
                                " must be sorted and distinct");
        if (parts[xi].v.size() != n_star)
            throw clause_violation("beta", "part " + std::to_string(xi) + " has |v| = " +
                                               std::to_string(parts[xi].v.size()) +
                                               ", expected arity " + std::to_string(n_star));
        if (!try_positions(parts[xi].child->support(), parts[xi].v))
            throw clause_violation("beta", "v of part " + std::to_string(xi) +
                                               " is not contained in the part support");
    }
    if (child_height + 1 > kMaxHeight)
        throw resource_limit("amalgamate: height " + std::to_string(child_height + 1) +
                             " exceeds the cap " + std::to_string(kMaxHeight));

    // clause (gamma): ordered Delta-system
    if (!sorted_unique(heart)) throw invalid_input("amalgamate: heart must be sorted and distinct");
    const std::size_t s = heart.size();
    std::vector<std::vector<gen_index>> blocks(parts.size());
    for (std::size_t xi = 0; xi < parts.size(); ++xi) {
        const auto& u = parts[xi].child->support();
        if (!try_positions(u, heart))
            throw clause_violation("gamma", "heart is not contained in part " + std::to_string(xi));
        std::set_difference(u.begin(), u.end(), heart.begin(), heart.end(),
                            std::back_inserter(blocks[xi]));
        if (blocks[xi].empty())
            throw clause_violation("gamma", "part " + std::to_string(xi) + " has an empty block");
        if (!heart.empty() && heart.back() >= blocks[xi].front())
            throw clause_violation("gamma", "heart does not precede the block of part " +
                                                std::to_string(xi));
    }
    for (std::size_t xi = 0; xi + 1 < parts.size(); ++xi)
        if (blocks[xi].back() >= blocks[xi + 1].front())
            throw clause_violation("gamma", "blocks of parts " + std::to_string(xi) + " and " +
                                                std::to_string(xi + 1) + " are not separated");

    // clause (delta): the order isomorphisms between parts (which fix the
    // heart, since the heart occupies the lowest positions everywhere) must
    // transport v, h, g and the tables; positions are aligned, so transported
    // equality is positionwise equality.
    const condition& first = *parts[0].child;
    for (std::size_t xi = 1; xi < parts.size(); ++xi) {
        const condition& other = *parts[xi].child;
        if (other.support_.size() != first.support_.size())
            throw clause_violation("delta", "parts 0 and " + std::to_string(xi) +
                                                " have different support sizes");
        const auto v0 = try_positions(first.support_, parts[0].v);
        const auto vx = try_positions(other.support_, parts[xi].v);
        if (*v0 != *vx)
            throw clause_violation("delta", "v of part " + std::to_string(xi) +
                                                " is not the transport of v of part 0");
        if (first.hist_ != other.hist_)
            throw clause_violation("delta", "history tables of parts 0 and " + std::to_string(xi) +
                                                " do not correspond");
        if (first.tags_ != other.tags_)
            throw clause_violation("delta", "tag tables of parts 0 and " + std::to_string(xi) +
                                                " do not correspond");
        if (first.table_.rows() != other.table_.rows())
            throw clause_violation("delta", "tables of parts 0 and " + std::to_string(xi) +
                                                " are not transports of each other");
    }

    // derived support: heart plus the increasing blocks
    std::vector<gen_index> support = heart;
    for (const auto& b : blocks) support.insert(support.end(), b.begin(), b.end());
    if (!sorted_unique(support)) throw internal_error("amalgamate: support not sorted");

    // derived history and tag tables
    const std::uint32_t height = child_height + 1;
    std::vector<std::vector<history_value>> hist(support.size());
    std::vector<std::vector<g_tag>> tags(support.size());
    for (auto& h : hist) h.resize(height, history_value::theta());
    for (auto& g : tags) g.resize(height);
    for (std::size_t xi = 0; xi < parts.size(); ++xi) {
        const condition& child = *parts[xi].child;
        const auto scatter = try_positions(support, child.support_);
        for (std::size_t k = 0; k < child.support_.size(); ++k) {
            const std::size_t pos = (*scatter)[k];
            const gen_index j = child.support_[k];
            const bool heart_elem = k < s;
            if (heart_elem && xi != 0) continue; // heart rows written once; parts agree
            for (std::uint32_t beta = 0; beta < child_height; ++beta) {
                hist[pos][beta] = child.hist_[k][beta];
                tags[pos][beta] = child.tags_[k][beta];
            }
            if (heart_elem) {
                hist[pos][child_height] = history_value::theta();
            } else {
                hist[pos][child_height] = (xi == zeta_star)
                                              ? history_value::theta_plus_one()
                                              : history_value::make_index(std::uint32_t(xi));
            }
            tags[pos][child_height] = {
                std::binary_search(parts[xi].v.begin(), parts[xi].v.end(), j), tau_star};
        }
    }

    valuation_table table = join_tables(parts, support, s, tau_star);

    return condition_ptr(new condition(width, zeta_star, std::move(tau_star), std::move(heart),
                                       std::move(parts), std::move(support), std::move(table),
                                       height, std::move(hist), std::move(tags)));
}

gen_index condition::atom_index() const {
    if (!is_atomic()) throw invalid_input("atom_index: not an atomic condition");
    return atom_index_;
}

std::uint32_t condition::zeta_star() const {
    if (is_atomic()) throw invalid_input("zeta_star: atomic condition");
    return zeta_star_;
}

const term_ptr& condition::tau_star() const {
    if (is_atomic()) throw invalid_input("tau_star: atomic condition");
    return tau_star_;
}

std::uint32_t condition::n_star() const {
    if (is_atomic()) throw invalid_input("n_star: atomic condition");
    return tau_star_->arity();
}

const std::vector<gen_index>& condition::heart() const {
    if (is_atomic()) throw invalid_input("heart: atomic condition");
    return heart_;
}

const std::vector<condition::part>& condition::parts() const {
    if (is_atomic()) throw invalid_input("parts: atomic condition");
    return parts_;
}

const condition_ptr& condition::part_child(std::uint32_t xi) const {
    if (is_atomic()) throw invalid_input("part_child: atomic condition");
    if (xi >= parts_.size()) throw invalid_input("part_child: index out of range");
    return parts_[xi].child;
}

std::vector<gen_index> condition::block(std::uint32_t xi) const {
    const auto& u = part_child(xi)->support();
    return std::vector<gen_index>(u.begin() + std::ptrdiff_t(heart_.size()), u.end());
}

std::size_t condition::position_of(gen_index j, const char* what) const {
    const auto pos = table_.position(j);
    if (!pos)
        throw invalid_input(std::string(what) + ": generator " + std::to_string(j) +
                            " not in support");
    return *pos;
}

history_value condition::history(gen_index j, std::uint32_t level) const {
    if (level >= height_) throw invalid_input("history: level out of range");
    return hist_[position_of(j, "history")][level];
}

const g_tag& condition::tag(gen_index j, std::uint32_t level) const {
    if (level >= height_) throw invalid_input("tag: level out of range");
    return tags_[position_of(j, "tag")][level];
}

std::vector<std::uint32_t> condition::fingerprint(gen_index j) const {
    const std::size_t pos = position_of(j, "fingerprint");
    std::vector<std::uint32_t> out;
    for (std::uint32_t beta = 0; beta < height_; ++beta)
        if (hist_[pos][beta].is_index()) out.push_back(beta);
    return out;
}

bool condition::equals(const condition& other) const {
    if (width_ != other.width_ || height_ != other.height_) return false;
    if (support_ != other.support_) return false;
    if (is_atomic() != other.is_atomic()) return false;
    if (is_atomic()) return atom_index_ == other.atom_index_;
    if (zeta_star_ != other.zeta_star_ || !tau_star_->equals(*other.tau_star_)) return false;
    if (heart_ != other.heart_) return false;
    for (std::size_t xi = 0; xi < parts_.size(); ++xi) {
        if (parts_[xi].v != other.parts_[xi].v) return false;
        if (!parts_[xi].child->equals(*other.parts_[xi].child)) return false;
    }
    return true;
}

namespace {

bool leq_impl(const condition& p, const condition& q) {
    if (p.equals(q)) return true;
    if (q.is_atomic()) return false;
    for (const auto& pt : q.parts())
        if (leq_impl(p, *pt.child)) return true;
    if (p.is_atomic()) return false;
    // parallel amalgams: same term, heart and v-sets, supports equal partwise,
    // parts pairwise below; the official indices may differ
    if (!p.tau_star()->equals(*q.tau_star())) return false;
    if (p.heart() != q.heart()) return false;
    for (std::uint32_t xi = 0; xi < p.width(); ++xi) {
        const auto& pp = p.parts()[xi];
        const auto& qp = q.parts()[xi];
        if (pp.v != qp.v) return false;
        if (pp.child->support() != qp.child->support()) return false;
        if (!leq_impl(*pp.child, *qp.child)) return false;
    }
    return true;
}

bool leq_pr_impl(const condition& p, const condition& q) {
    if (p.equals(q)) return true;
    if (q.is_atomic()) return false;
    return leq_pr_impl(p, *q.part_child(q.zeta_star()));
}

} // namespace

bool leq(const condition& p, const condition& q) {
    if (p.width() != q.width()) throw invalid_input("leq: width mismatch");
    return leq_impl(p, q);
}

bool leq_pr(const condition& p, const condition& q) {
    if (p.width() != q.width()) throw invalid_input("leq_pr: width mismatch");
    return leq_pr_impl(p, q);
}

std::optional<order_map> iso_map(const condition& p, const condition& q) {
    if (p.width() != q.width()) throw invalid_input("iso_map: width mismatch");
    if (p.height() != q.height()) return std::nullopt;
    if (p.support().size() != q.support().size()) return std::nullopt;
    for (std::size_t pos = 0; pos < p.support().size(); ++pos) {
        const gen_index jp = p.support()[pos];
        const gen_index jq = q.support()[pos];
        for (std::uint32_t beta = 0; beta < p.height(); ++beta) {
            if (!(p.history(jp, beta) == q.history(jq, beta))) return std::nullopt;
            if (!(p.tag(jp, beta) == q.tag(jq, beta))) return std::nullopt;
        }
    }
    // the table transport law follows from history/tag preservation; verify it
    if (p.table().rows() != q.table().rows())
        throw internal_error("iso_map: histories correspond but tables do not");
    return order_map::between(p.support(), q.support());
}

condition_ptr relabel(const condition_ptr& p, const order_map& map) {
    if (!p) throw invalid_input("relabel: null condition");
    if (p->is_atomic()) return condition::atomic(p->width(), map.map(p->atom_index()));
    std::vector<gen_index> heart;
    heart.reserve(p->heart().size());
    for (gen_index j : p->heart()) heart.push_back(map.map(j));
    std::vector<condition::part> parts;
    parts.reserve(p->parts().size());
    for (const auto& pt : p->parts()) {
        std::vector<gen_index> v;
        v.reserve(pt.v.size());
        for (gen_index j : pt.v) v.push_back(map.map(j));
        parts.push_back({relabel(pt.child, map), std::move(v)});
    }
    return condition::amalgamate(p->zeta_star(), p->tau_star(), std::move(heart),
                                 std::move(parts));
}

condition_ptr transport(const order_map& H, const condition_ptr& p0, const condition& q0,
                        const condition& q1) {
    if (!p0) throw invalid_input("transport: null condition");
    const auto iso = iso_map(q0, q1);
    if (!iso || !(*iso == H))
        throw invalid_input("transport: map is not the isomorphism of the outer pair");
    if (!leq(*p0, q0)) throw invalid_input("transport: condition is not below the source");
    condition_ptr p1 = relabel(p0, H);
    if (!leq(*p1, q1)) throw internal_error("transport: transported condition not below target");
    return p1;
}

namespace {

condition_ptr transform_impl(const condition_ptr& p, const condition_ptr& q) {
    if (p->equals(*q)) return q;
    if (q->is_atomic()) throw internal_error("transform: atomic target without equality");
    const auto& qparts = q->parts();

    // official-part descent: the least part weakly above p becomes official
    std::optional<std::uint32_t> xi_star;
    for (std::uint32_t xi = 0; xi < q->width(); ++xi)
        if (leq(*p, *qparts[xi].child)) {
            xi_star = xi;
            break;
        }

    std::vector<condition::part> new_parts;
    new_parts.reserve(q->width());
    if (xi_star) {
        for (std::uint32_t xi = 0; xi < q->width(); ++xi) {
            condition_ptr moved = p;
            if (xi != *xi_star) {
                const auto iso = iso_map(*qparts[*xi_star].child, *qparts[xi].child);
                if (!iso) throw internal_error("transform: amalgam parts not isomorphic");
                moved = relabel(p, *iso);
            }
            new_parts.push_back({transform_impl(moved, qparts[xi].child), qparts[xi].v});
        }
        return condition::amalgamate(*xi_star, q->tau_star(), q->heart(), std::move(new_parts));
    }

    // parallel amalgams: keep p's official index, transform parts pairwise
    if (p->is_atomic()) throw internal_error("transform: shape mismatch in parallel case");
    for (std::uint32_t xi = 0; xi < q->width(); ++xi)
        new_parts.push_back({transform_impl(p->part_child(xi), qparts[xi].child), qparts[xi].v});
    return condition::amalgamate(p->zeta_star(), q->tau_star(), q->heart(), std::move(new_parts));
}

} // namespace

condition_ptr transform(const condition_ptr& p, const condition_ptr& q) {
    if (!p || !q) throw invalid_input("transform: null condition");
    if (!leq(*p, *q)) throw invalid_input("transform: first condition is not below the second");
    return transform_impl(p, q);
}

condition_ptr make_corrupted_history(const condition_ptr& p) {
    if (!p || p->is_atomic()) throw invalid_input("make_corrupted_history: need an amalgam");
    auto q = std::shared_ptr<condition>(new condition(*p));
    // make the two largest generators historically indistinguishable: no level
    // separates them with two distinct index values any more
    const std::size_t last = q->support_.size() - 1;
    q->hist_[last] = q->hist_[last - 1];
    return q;
}

} // namespace histforce
