#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hadamard/space.hpp"

namespace hadamard {

/// Fixed, ordered set of leaf labels. The order is part of the space
/// identity: split bitmasks and pendant indices refer to it.
class TaxonSet {
  public:
    explicit TaxonSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
        if (labels_.size() < 3) throw std::invalid_argument("need at least 3 taxa");
        if (labels_.size() > 30) throw std::invalid_argument("too many taxa for split masks");
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i].empty()) throw std::invalid_argument("empty taxon label");
            for (std::size_t j = i + 1; j < labels_.size(); ++j)
                if (labels_[i] == labels_[j])
                    throw std::invalid_argument("duplicate taxon label: " + labels_[i]);
        }
    }

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == name) return i;
        return std::nullopt;
    }

    /// Splits live on the taxa plus a root marker occupying the next bit.
    std::uint32_t root_bit() const { return 1u << labels_.size(); }
    std::uint32_t universe() const { return (1u << (labels_.size() + 1)) - 1; }
    std::uint32_t all_taxa() const { return (1u << labels_.size()) - 1; }

    bool operator==(const TaxonSet& other) const { return labels_ == other.labels_; }

  private:
    std::vector<std::string> labels_;
};

/// One side of a bipartition of taxa-plus-root, stored canonically as the
/// side that excludes taxon 0.
struct Split {
    std::uint32_t mask = 0;
    auto operator<=>(const Split&) const = default;
};

/// Canonical split for the clade (leaf set) below an edge of a rooted tree.
inline Split split_from_clade(std::uint32_t clade, const TaxonSet& taxa) {
    if (clade == 0 || (clade & ~taxa.all_taxa()) != 0)
        throw std::invalid_argument("clade mask outside taxon range");
    if (clade & 1u) return Split{taxa.universe() & ~clade};
    return Split{clade};
}

/// The clade orientation (side without the root marker) of a canonical split.
inline std::uint32_t split_clade(Split s, const TaxonSet& taxa) {
    if (s.mask & taxa.root_bit()) return taxa.universe() & ~s.mask;
    return s.mask;
}

/// A split is pendant when one side is a single element (leaf edges, and the
/// root marker's own side). Pendant lengths are stored per taxon, not as
/// splits.
inline bool split_is_pendant(Split s, const TaxonSet& taxa) {
    const int a = std::popcount(s.mask);
    const int b = std::popcount(taxa.universe() & ~s.mask);
    return a <= 1 || b <= 1;
}

/// Two bipartitions are compatible iff some pair of opposite sides is
/// disjoint. In canonical form the side pair containing taxon 0 on both
/// splits is never empty, so the test reduces to disjointness or nesting.
inline bool splits_compatible(Split s, Split u, const TaxonSet& taxa) {
    const std::uint32_t all = taxa.universe();
    return (s.mask & u.mask) == 0 || (s.mask & ~u.mask & all) == 0 ||
           (u.mask & ~s.mask & all) == 0;
}

/// A point of the tree-space complex: pairwise-compatible non-pendant splits
/// with strictly positive lengths, plus one pendant length per taxon.
/// Zero-length splits are never stored; boundary points simply omit them.
struct BhvTree {
    std::vector<std::pair<Split, double>> splits;  // sorted by mask
    std::vector<double> pendant_lengths;

    void sort_splits() {
        std::sort(splits.begin(), splits.end(),
                  [](const auto& a, const auto& b) { return a.first.mask < b.first.mask; });
    }
};

struct NewickParseError : std::runtime_error {
    NewickParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;
};

namespace detail {

class NewickParser {
  public:
    NewickParser(std::string_view text, const TaxonSet* taxa, double tolerance)
        : text_(text), fixed_taxa_(taxa), tol_(tolerance) {}

    std::pair<BhvTree, TaxonSet> run() {
        skip_ws();
        if (peek() != '(') fail("expected '(' to open the root group");
        const std::uint32_t root_clade = parse_group();
        skip_ws();
        if (peek() != ';') fail("expected ';' after the root group");
        ++pos_;
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters after ';'");

        TaxonSet taxa = fixed_taxa_ ? *fixed_taxa_ : TaxonSet(labels_);
        if (fixed_taxa_) {
            if (std::popcount(root_clade) != static_cast<int>(taxa.size()))
                fail("tree does not cover the expected taxa");
        }
        BhvTree tree;
        tree.pendant_lengths.assign(taxa.size(), 0.0);
        for (const auto& [taxon, len] : pendants_) tree.pendant_lengths[taxon] = len;
        for (const auto& [clade, len] : interior_)
            if (len > tol_) tree.splits.emplace_back(split_from_clade(clade, taxa), len);
        tree.sort_splits();
        return {std::move(tree), std::move(taxa)};
    }

  private:
    [[noreturn]] void fail(const std::string& what) const { throw NewickParseError(what, pos_); }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                       text_[pos_] == '\r' || text_[pos_] == '\n'))
            ++pos_;
    }

    static bool label_char(char c) {
        return c != '(' && c != ')' && c != ',' && c != ':' && c != ';' && c != ' ' &&
               c != '\t' && c != '\r' && c != '\n' && c != '\0';
    }

    // Returns the clade mask below the node. Records pendant lengths and
    // interior edges of the children as it unwinds.
    std::uint32_t parse_group() {
        ++pos_;  // consume '('
        std::uint32_t clade = 0;
        std::size_t children = 0;
        while (true) {
            clade |= parse_child();
            ++children;
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            if (peek() == ')') {
                ++pos_;
                break;
            }
            fail("expected ',' or ')'");
        }
        if (children < 2) fail("a group needs at least two children");
        return clade;
    }

    std::uint32_t parse_child() {
        skip_ws();
        std::uint32_t clade = 0;
        bool is_leaf = false;
        if (peek() == '(') {
            clade = parse_group();
        } else {
            clade = 1u << parse_leaf();
            is_leaf = true;
        }
        skip_ws();
        if (peek() != ':') fail("missing branch length");
        ++pos_;
        const double len = parse_decimal();
        if (is_leaf)
            pendants_.emplace_back(std::countr_zero(clade), len);
        else
            interior_.emplace_back(clade, len);
        return clade;
    }

    std::size_t parse_leaf() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && label_char(text_[pos_])) ++pos_;
        if (pos_ == start) fail("expected a taxon label");
        const std::string_view name = text_.substr(start, pos_ - start);
        std::size_t id;
        if (fixed_taxa_) {
            const auto found = fixed_taxa_->index_of(name);
            if (!found) {
                pos_ = start;
                fail("label '" + std::string(name) + "' not in the taxon set");
            }
            id = *found;
        } else {
            for (std::size_t i = 0; i < labels_.size(); ++i)
                if (labels_[i] == name) {
                    pos_ = start;
                    fail("duplicate leaf label '" + std::string(name) + "'");
                }
            if (labels_.size() >= 30) fail("too many taxa");
            labels_.emplace_back(name);
            id = labels_.size() - 1;
        }
        if (seen_ & (1u << id)) {
            pos_ = start;
            fail("duplicate leaf label '" + std::string(name) + "'");
        }
        seen_ |= 1u << id;
        return id;
    }

    double parse_decimal() {
        skip_ws();
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        const auto result = std::from_chars(begin, end, value);
        if (result.ec != std::errc{}) fail("expected a branch length");
        if (!(value >= 0.0) || !std::isfinite(value)) fail("branch length must be nonnegative");
        pos_ += static_cast<std::size_t>(result.ptr - begin);
        return value;
    }

    std::string_view text_;
    const TaxonSet* fixed_taxa_;
    double tol_;
    std::size_t pos_ = 0;
    std::uint32_t seen_ = 0;
    std::vector<std::string> labels_;
    std::vector<std::pair<std::size_t, double>> pendants_;
    std::vector<std::pair<std::uint32_t, double>> interior_;
};

inline std::string format_branch_length(double value) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

}  // namespace detail

/// Parses one rooted Newick expression with branch lengths on every non-root
/// node, validating leaf labels against `taxa`.
inline BhvTree parse_newick(std::string_view text, const TaxonSet& taxa,
                            double tolerance = kDefaultTolerance) {
    return detail::NewickParser(text, &taxa, tolerance).run().first;
}

/// Parses a rooted Newick expression, deriving the taxon set from the leaf
/// labels in encounter order.
inline std::pair<BhvTree, TaxonSet> parse_newick(std::string_view text,
                                                 double tolerance = kDefaultTolerance) {
    return detail::NewickParser(text, nullptr, tolerance).run();
}

/// Serializes a tree back to Newick. Children are ordered by their smallest
/// taxon index, so the output is a canonical form: parse(emit(p)) == p and
/// equal points emit byte-identical text.
inline std::string emit_newick(const BhvTree& tree, const TaxonSet& taxa) {
    if (tree.pendant_lengths.size() != taxa.size())
        throw std::invalid_argument("pendant length count does not match the taxon set");
    struct Node {
        std::uint32_t clade;
        double length;
        std::vector<std::size_t> children;  // indices into nodes
        std::vector<std::size_t> leaves;
    };
    std::vector<Node> nodes;
    nodes.push_back({taxa.all_taxa(), 0.0, {}, {}});  // root
    for (const auto& [split, len] : tree.splits)
        nodes.push_back({split_clade(split, taxa), len, {}, {}});
    // Parent of a clade: the smallest strict superset among the others.
    std::vector<std::size_t> order(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin() + 1, order.end(), [&](std::size_t a, std::size_t b) {
        return std::popcount(nodes[a].clade) < std::popcount(nodes[b].clade);
    });
    for (std::size_t oi = 1; oi < order.size(); ++oi) {
        const std::size_t i = order[oi];
        std::size_t parent = 0;
        int best = std::popcount(taxa.all_taxa()) + 1;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (j == i) continue;
            const std::uint32_t c = nodes[j].clade;
            if ((nodes[i].clade & ~c) == 0 && c != nodes[i].clade && std::popcount(c) < best) {
                best = std::popcount(c);
                parent = j;
            }
        }
        nodes[parent].children.push_back(i);
    }
    for (std::size_t taxon = 0; taxon < taxa.size(); ++taxon) {
        std::size_t parent = 0;
        int best = std::popcount(taxa.all_taxa()) + 1;
        for (std::size_t j = 1; j < nodes.size(); ++j)
            if ((nodes[j].clade >> taxon) & 1u)
                if (std::popcount(nodes[j].clade) < best) {
                    best = std::popcount(nodes[j].clade);
                    parent = j;
                }
        nodes[parent].leaves.push_back(taxon);
    }

    auto min_taxon = [](std::uint32_t mask) { return std::countr_zero(mask); };
    std::string out;
    auto render = [&](auto&& self, std::size_t i) -> void {
        const Node& node = nodes[i];
        struct Entry {
            int key;
            bool leaf;
            std::size_t id;
        };
        std::vector<Entry> entries;
        for (std::size_t c : node.children)
            entries.push_back({min_taxon(nodes[c].clade), false, c});
        for (std::size_t leaf : node.leaves)
            entries.push_back({static_cast<int>(leaf), true, leaf});
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.key < b.key; });
        out += '(';
        for (std::size_t e = 0; e < entries.size(); ++e) {
            if (e) out += ',';
            if (entries[e].leaf) {
                out += taxa.label(entries[e].id);
                out += ':';
                out += detail::format_branch_length(tree.pendant_lengths[entries[e].id]);
            } else {
                self(self, entries[e].id);
                out += ':';
                out += detail::format_branch_length(nodes[entries[e].id].length);
            }
        }
        out += ')';
    };
    render(render, 0);
    out += ';';
    return out;
}

/// One straight segment of a tree-space geodesic: the splits that shrink to
/// zero across it (with source-tree lengths) and the splits that grow from
/// zero (with target-tree lengths).
struct GeodesicLeg {
    std::vector<std::pair<Split, double>> drop;
    std::vector<std::pair<Split, double>> grow;
    double drop_norm = 0.0;
    double grow_norm = 0.0;
};

/// Full description of the geodesic between two trees: linearly interpolating
/// coordinates (common splits, and every split when the two split sets are
/// jointly compatible) plus the ordered legs for the conflicting splits.
struct TreeGeodesic {
    double length = 0.0;
    std::vector<std::pair<Split, std::pair<double, double>>> shared;  // (from, to)
    std::vector<GeodesicLeg> legs;
};

/// Desk-scale tree space backend. Geodesics are found by exhaustive search
/// over ordered partitions of the conflicting splits, so the leaf count is
/// capped at 8 (at most six conflicting splits per side).
class BhvSpace {
  public:
    using Point = BhvTree;
    static constexpr std::size_t kMaxLeavesForGeodesics = 8;

    explicit BhvSpace(TaxonSet taxa, double tolerance = kDefaultTolerance)
        : taxa_(std::move(taxa)), tol_(checked_tolerance(tolerance)) {}

    const TaxonSet& taxa() const { return taxa_; }
    std::size_t leaf_count() const { return taxa_.size(); }
    double tolerance() const { return tol_; }

    void validate(const Point& tree) const {
        if (tree.pendant_lengths.size() != taxa_.size())
            throw std::invalid_argument("pendant length count does not match the taxon set");
        for (double len : tree.pendant_lengths)
            if (!(len >= 0.0) || !std::isfinite(len))
                throw std::invalid_argument("pendant lengths must be finite and nonnegative");
        for (std::size_t i = 0; i < tree.splits.size(); ++i) {
            const auto& [split, len] = tree.splits[i];
            if (!(len > tol_) || !std::isfinite(len))
                throw std::invalid_argument("stored split lengths must exceed the tolerance");
            if ((split.mask & ~taxa_.universe()) != 0 || (split.mask & 1u) != 0)
                throw std::invalid_argument("split mask is not canonical for this taxon set");
            if (split_is_pendant(split, taxa_))
                throw std::invalid_argument("pendant edges belong in pendant_lengths");
            for (std::size_t j = i + 1; j < tree.splits.size(); ++j) {
                if (tree.splits[j].first == split)
                    throw std::invalid_argument("duplicate split");
                if (!splits_compatible(split, tree.splits[j].first, taxa_))
                    throw std::invalid_argument("splits are not pairwise compatible");
            }
        }
    }

    double distance(const Point& a, const Point& b) const { return geodesic_data(a, b).length; }

    Point geodesic(const Point& a, const Point& b, double t) const {
        check_unit_interval(t);
        if (t == 0.0) return a;
        if (t == 1.0) return b;
        return evaluate(geodesic_data(a, b), a, b, t);
    }

    /// Length of the path through the face where every conflicting split
    /// vanishes at once. Always an upper bound for the distance.
    double cone_path_length(const Point& a, const Point& b) const {
        const Decomposition parts = decompose(a, b);
        double e_sq = 0.0, f_sq = 0.0;
        for (const auto& [split, len] : parts.only_a) e_sq += len * len;
        for (const auto& [split, len] : parts.only_b) f_sq += len * len;
        const double cone = std::sqrt(e_sq) + std::sqrt(f_sq);
        return std::sqrt(parts.fixed_sq + cone * cone);
    }

    /// Computes the geodesic decomposition (and therefore the distance).
    TreeGeodesic geodesic_data(const Point& a, const Point& b) const {
        Decomposition parts = decompose(a, b);
        TreeGeodesic out;
        out.shared = parts.common;
        // A one-sided split compatible with every split of the other tree
        // acts as a common edge of length zero there: it interpolates
        // linearly over the whole path instead of waiting for a support
        // block. One simultaneous pass settles the classification: a split
        // blocked by some crossing split stays blocked, because that blocker
        // can never move to the shared set itself.
        std::vector<std::pair<Split, double>> crossing_a, crossing_b;
        for (const auto& [split, len] : parts.only_a) {
            bool everywhere = true;
            for (const auto& [other, olen] : parts.only_b)
                everywhere = everywhere && splits_compatible(split, other, taxa_);
            if (everywhere) {
                out.shared.push_back({split, {len, 0.0}});
                parts.fixed_sq += len * len;
            } else {
                crossing_a.push_back({split, len});
            }
        }
        for (const auto& [split, len] : parts.only_b) {
            bool everywhere = true;
            for (const auto& [other, olen] : parts.only_a)
                everywhere = everywhere && splits_compatible(split, other, taxa_);
            if (everywhere) {
                out.shared.push_back({split, {0.0, len}});
                parts.fixed_sq += len * len;
            } else {
                crossing_b.push_back({split, len});
            }
        }
        parts.only_a = std::move(crossing_a);
        parts.only_b = std::move(crossing_b);
        if (parts.only_a.empty() || parts.only_b.empty()) {
            out.length = std::sqrt(parts.fixed_sq);
            return out;
        }
        search_supports(parts, out);
        return out;
    }

  private:
    struct Decomposition {
        std::vector<std::pair<Split, std::pair<double, double>>> common;
        std::vector<std::pair<Split, double>> only_a, only_b;
        double fixed_sq = 0.0;  // squared contribution of common + pendant coords
        const Point* a = nullptr;
        const Point* b = nullptr;
    };

    Decomposition decompose(const Point& a, const Point& b) const {
        if (taxa_.size() > kMaxLeavesForGeodesics)
            throw std::invalid_argument("geodesic search is limited to 8 leaves");
        validate(a);
        validate(b);
        Decomposition parts;
        parts.a = &a;
        parts.b = &b;
        std::size_t i = 0, j = 0;
        while (i < a.splits.size() || j < b.splits.size()) {
            if (j == b.splits.size() ||
                (i < a.splits.size() && a.splits[i].first.mask < b.splits[j].first.mask)) {
                parts.only_a.push_back(a.splits[i]);
                ++i;
            } else if (i == a.splits.size() || b.splits[j].first.mask < a.splits[i].first.mask) {
                parts.only_b.push_back(b.splits[j]);
                ++j;
            } else {
                parts.common.push_back({a.splits[i].first, {a.splits[i].second, b.splits[j].second}});
                const double diff = a.splits[i].second - b.splits[j].second;
                parts.fixed_sq += diff * diff;
                ++i;
                ++j;
            }
        }
        for (std::size_t p = 0; p < taxa_.size(); ++p) {
            const double diff = a.pendant_lengths[p] - b.pendant_lengths[p];
            parts.fixed_sq += diff * diff;
        }
        return parts;
    }

    // One ordered partition of the conflicting splits on one side.
    struct Partition {
        std::uint8_t block_count = 0;
        std::array<std::uint16_t, 8> members{};  // item-index mask per block
        std::array<double, 8> norm{};
        std::array<std::uint16_t, 8> aux{};  // A side: compat mask; B side: prefix mask
    };

    static void enumerate_partitions(std::size_t items, std::size_t blocks,
                                     const std::vector<double>& sq_lengths,
                                     std::vector<Partition>& out) {
        Partition current;
        current.block_count = static_cast<std::uint8_t>(blocks);
        std::array<double, 8> block_sq{};
        auto recurse = [&](auto&& self, std::size_t item, std::size_t used) -> void {
            if (items - item < blocks - used) return;  // not enough items left
            if (item == items) {
                for (std::size_t b = 0; b < blocks; ++b) current.norm[b] = std::sqrt(block_sq[b]);
                out.push_back(current);
                return;
            }
            for (std::size_t b = 0; b < blocks; ++b) {
                const bool fresh = current.members[b] == 0;
                current.members[b] |= static_cast<std::uint16_t>(1u << item);
                block_sq[b] += sq_lengths[item];
                self(self, item + 1, used + (fresh ? 1 : 0));
                block_sq[b] -= sq_lengths[item];
                current.members[b] &= static_cast<std::uint16_t>(~(1u << item));
            }
        };
        recurse(recurse, 0, 0);
    }

    // Exhaustive minimum over support sequences: ordered partitions
    // (A_1..A_k) of the a-only splits and (B_1..B_k) of the b-only splits,
    // subject to
    //   (a) nondecreasing norm ratios |A_1|/|B_1| <= ... <= |A_k|/|B_k|, and
    //   (b) every split of B_i compatible with every split of A_j for i < j,
    // scoring sqrt(fixed + sum_i (|A_i| + |B_i|)^2). The single-block
    // sequence is always admissible, so the search never comes back empty.
    void search_supports(const Decomposition& parts, TreeGeodesic& out) const {
        const std::size_t e = parts.only_a.size();
        const std::size_t f = parts.only_b.size();
        std::vector<double> e_sq(e), f_sq(f);
        for (std::size_t i = 0; i < e; ++i)
            e_sq[i] = parts.only_a[i].second * parts.only_a[i].second;
        for (std::size_t j = 0; j < f; ++j)
            f_sq[j] = parts.only_b[j].second * parts.only_b[j].second;

        // compat[i] = mask of b-only splits compatible with a-only split i.
        std::vector<std::uint16_t> compat(e, 0);
        for (std::size_t i = 0; i < e; ++i)
            for (std::size_t j = 0; j < f; ++j)
                if (splits_compatible(parts.only_a[i].first, parts.only_b[j].first, taxa_))
                    compat[i] |= static_cast<std::uint16_t>(1u << j);

        double best_sum = std::numeric_limits<double>::infinity();
        Partition best_a, best_b;
        std::vector<Partition> apart, bpart;
        const std::size_t kmax = std::min(e, f);
        for (std::size_t k = 1; k <= kmax; ++k) {
            apart.clear();
            bpart.clear();
            enumerate_partitions(e, k, e_sq, apart);
            enumerate_partitions(f, k, f_sq, bpart);
            for (Partition& p : apart)
                for (std::size_t blk = 0; blk < k; ++blk) {
                    std::uint16_t mask = 0xFFFF;
                    std::uint16_t items = p.members[blk];
                    while (items) {
                        const int i = std::countr_zero(items);
                        items &= static_cast<std::uint16_t>(items - 1);
                        mask &= compat[static_cast<std::size_t>(i)];
                    }
                    p.aux[blk] = mask;
                }
            for (Partition& p : bpart) {
                std::uint16_t prefix = 0;
                for (std::size_t blk = 0; blk < k; ++blk) {
                    prefix |= p.members[blk];
                    p.aux[blk] = prefix;
                }
            }
            for (const Partition& pa : apart) {
                for (const Partition& pb : bpart) {
                    bool ok = true;
                    for (std::size_t blk = 0; blk + 1 < k && ok; ++blk)
                        ok = pa.norm[blk] * pb.norm[blk + 1] <= pa.norm[blk + 1] * pb.norm[blk];
                    for (std::size_t blk = 1; blk < k && ok; ++blk)
                        ok = (pb.aux[blk - 1] & static_cast<std::uint16_t>(~pa.aux[blk])) == 0;
                    if (!ok) continue;
                    double sum = 0.0;
                    for (std::size_t blk = 0; blk < k; ++blk) {
                        const double leg = pa.norm[blk] + pb.norm[blk];
                        sum += leg * leg;
                    }
                    if (sum < best_sum) {
                        best_sum = sum;
                        best_a = pa;
                        best_b = pb;
                    }
                }
            }
        }

        out.length = std::sqrt(parts.fixed_sq + best_sum);
        for (std::size_t blk = 0; blk < best_a.block_count; ++blk) {
            GeodesicLeg leg;
            leg.drop_norm = best_a.norm[blk];
            leg.grow_norm = best_b.norm[blk];
            std::uint16_t items = best_a.members[blk];
            while (items) {
                const int i = std::countr_zero(items);
                items &= static_cast<std::uint16_t>(items - 1);
                leg.drop.push_back(parts.only_a[static_cast<std::size_t>(i)]);
            }
            items = best_b.members[blk];
            while (items) {
                const int j = std::countr_zero(items);
                items &= static_cast<std::uint16_t>(items - 1);
                leg.grow.push_back(parts.only_b[static_cast<std::size_t>(j)]);
            }
            out.legs.push_back(std::move(leg));
        }
    }

    // Point on the support path at parameter t. Coordinates of leg j scale
    // with (1-t)|A_j| - t|B_j|: positive values keep the dropping splits,
    // negative values activate the growing ones. Norm ratio monotonicity
    // keeps the surviving splits pairwise compatible at every t.
    Point evaluate(const TreeGeodesic& g, const Point& a, const Point& b, double t) const {
        Point out;
        out.pendant_lengths.resize(taxa_.size());
        for (std::size_t p = 0; p < taxa_.size(); ++p)
            out.pendant_lengths[p] =
                (1.0 - t) * a.pendant_lengths[p] + t * b.pendant_lengths[p];
        for (const auto& [split, fromto] : g.shared) {
            const double len = (1.0 - t) * fromto.first + t * fromto.second;
            if (len > tol_) out.splits.push_back({split, len});
        }
        for (const GeodesicLeg& leg : g.legs) {
            const double c = (1.0 - t) * leg.drop_norm - t * leg.grow_norm;
            if (c > 0.0) {
                for (const auto& [split, len] : leg.drop) {
                    const double scaled = c * len / leg.drop_norm;
                    if (scaled > tol_) out.splits.push_back({split, scaled});
                }
            } else if (c < 0.0) {
                for (const auto& [split, len] : leg.grow) {
                    const double scaled = -c * len / leg.grow_norm;
                    if (scaled > tol_) out.splits.push_back({split, scaled});
                }
            }
        }
        out.sort_splits();
        return out;
    }

    TaxonSet taxa_;
    double tol_;
};

}  // namespace hadamard
