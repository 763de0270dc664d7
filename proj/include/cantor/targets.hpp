#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cantor/cdf.hpp"
#include "cantor/counting.hpp"
#include "cantor/error.hpp"
#include "cantor/interval_union.hpp"
#include "cantor/measure.hpp"
#include "cantor/rational.hpp"

namespace cantor {

/// The shrinking target A_n^y(sigma) = { x : ||2^n x - y|| < sigma }, restricted to [0,1].
struct ApproxTarget {
    unsigned long n = 1;
    Rational y = 0;
    Rational sigma = Rational(1, 4);

    void validate() const {
        if (n < 1) throw DomainError("ApproxTarget: n must be >= 1");
        if (sigma <= 0) throw DomainError("ApproxTarget: sigma must be > 0");
    }
    /// sigma >= 1/2 leaves only finitely many points out; treated as all of [0,1].
    bool covers_unit() const { return sigma * 2 >= 1; }
};

/// Largest n for which build_target_union will materialize the 2^n pieces.
inline constexpr unsigned long kMaxMaterializedN = 20;

/// Explicit union of the open pieces ((b + y - sigma)/2^n, (b + y + sigma)/2^n),
/// clipped to [0,1]. Only y mod 1 matters. For large n use the traversal-based
/// measure_target / count_target_endpoints instead, which never list all pieces.
inline IntervalUnion build_target_union(const ApproxTarget& t) {
    t.validate();
    if (t.covers_unit()) return IntervalUnion::unit();
    if (t.n > kMaxMaterializedN) {
        throw ComputationError("build_target_union: n = " + std::to_string(t.n) + " exceeds the materialization limit " +
                               std::to_string(kMaxMaterializedN));
    }
    const Rational y = frac_of(t.y);
    const Rational scale(pow2(t.n));
    const Integer b_first = floor_of(Rational(-y - t.sigma));
    const Integer b_last = ceil_of(Rational(scale - y + t.sigma));
    std::vector<Segment> pieces;
    for (Integer b = b_first; b <= b_last; ++b) {
        Rational c(b);
        c += y;
        pieces.push_back(Segment::open((c - t.sigma) / scale, (c + t.sigma) / scale));
    }
    return IntervalUnion::clipped(pieces);
}

/// Work limit for the Cantor-tree traversals below. Their cost grows like
/// 2^(n log 2 / log 3), so exact answers are only practical for moderate n.
struct TraversalBudget {
    std::uint64_t max_nodes = std::uint64_t{1} << 24;
};

namespace detail {

/// Pieces of A_n^y(sigma) meeting a construction interval, in integer arithmetic.
/// With y = Y/Q, sigma = S/Q, piece b meets [a/3^m, (a+1)/3^m] iff
///   (2^n a Q - (Y+S) 3^m) / (3^m Q) < b < (2^n (a+1) Q + (S-Y) 3^m) / (3^m Q).
class TargetGeometry {
public:
    explicit TargetGeometry(const ApproxTarget& t) : n_(t.n), y_(frac_of(t.y)), sigma_(t.sigma), scale_(pow2(t.n)) {
        Q_ = lcm(y_.get_den(), sigma_.get_den());
        Y_ = y_.get_num() * (Q_ / y_.get_den());
        S_ = sigma_.get_num() * (Q_ / sigma_.get_den());
        Qn_ = Q_ << n_;
    }

    /// Range of b for the node (a, m); empty when first > second.
    std::pair<Integer, Integer> meeting(const Integer& a, unsigned long m) {
        level(m);
        const Level& L = levels_[m];
        Integer t = a * Qn_;
        Integer lo = t - L.lo_shift;
        mpz_fdiv_q(lo.get_mpz_t(), lo.get_mpz_t(), L.den.get_mpz_t());
        lo += 1;
        Integer hi = t + Qn_ + L.hi_shift;
        mpz_cdiv_q(hi.get_mpz_t(), hi.get_mpz_t(), L.den.get_mpz_t());
        hi -= 1;
        return {std::move(lo), std::move(hi)};
    }

    /// Piece b, unclipped.
    Segment piece(const Integer& b) const {
        Rational c(b);
        c += y_;
        return Segment::open((c - sigma_) / scale_, (c + sigma_) / scale_);
    }

    const Integer& pow3_at(unsigned long m) {
        level(m);
        return levels_[m].p3;
    }

private:
    struct Level {
        Integer p3, den, lo_shift, hi_shift;
    };
    void level(unsigned long m) {
        while (levels_.size() <= m) {
            Level L;
            L.p3 = levels_.empty() ? Integer(1) : Integer(levels_.back().p3 * 3);
            L.den = L.p3 * Q_;
            L.lo_shift = (Y_ + S_) * L.p3;
            L.hi_shift = (S_ - Y_) * L.p3;
            levels_.push_back(std::move(L));
        }
    }

    unsigned long n_;
    Rational y_;
    Rational sigma_;
    Rational scale_;
    Integer Q_, Y_, S_, Qn_;
    std::vector<Level> levels_;
};

/// A construction interval [a/3^m, (a+1)/3^m] of K. `bits` holds the digits of a
/// (all 0 or 2) read in binary, so F(a/3^m) = bits 2^-m.
struct Node {
    Integer a;
    unsigned long m = 0;
    Integer bits;

    Rational lo(const Integer& p3) const {
        Rational r(a, p3);
        r.canonicalize();
        return r;
    }
    Rational hi(const Integer& p3) const {
        Rational r(a + 1, p3);
        r.canonicalize();
        return r;
    }
};

/// Depth-first walk over the construction intervals of K that meet the target. A
/// node meeting a single piece is resolved in closed form by the visitor; a node
/// meeting several pieces is split. Nodes meeting nothing are pruned.
template <typename Visitor>
class CantorWalk {
public:
    CantorWalk(const ApproxTarget& t, Visitor& v, TraversalBudget budget) : geo_(t), visitor_(v), budget_(budget) {}

    auto run() { return visit(Node{Integer(0), 0, Integer(0)}); }

private:
    using Result = decltype(std::declval<Visitor&>().empty());

    Result visit(const Node& node) {
        if (++nodes_ > budget_.max_nodes) {
            throw BudgetExceeded("Cantor-tree traversal exceeded its budget of " + std::to_string(budget_.max_nodes) +
                                 " nodes");
        }
        auto [b_min, b_max] = geo_.meeting(node.a, node.m);
        if (b_min > b_max) return visitor_.empty();
        if (b_min == b_max) return visitor_.single(node, geo_.pow3_at(node.m), geo_.piece(b_min));
        if (auto leaf = visitor_.leaf(node, geo_, b_min, b_max)) return *leaf;
        Node child{node.a * 3, node.m + 1, node.bits << 1};
        Result r = visit(child);
        child.a += 2;
        child.bits += 1;
        r += visit(child);
        return r;
    }

    TargetGeometry geo_;
    Visitor& visitor_;
    TraversalBudget budget_;
    std::uint64_t nodes_ = 0;
};

/// F on the node, via F(x) = F(a/3^m) + 2^-m F(3^m x - a).
inline Rational node_cdf(const Node& node, const Integer& p3, const Rational& x) {
    Rational local = x * Rational(p3) - Rational(node.a);
    if (local < 0) local = 0;
    if (local > 1) local = 1;
    Rational v = Rational(node.bits) + cantor_cdf(local);
    mpq_div_2exp(v.get_mpq_t(), v.get_mpq_t(), node.m);
    return v;
}

struct MeasureVisitor {
    Rational empty() const { return 0; }

    Rational single(const Node& node, const Integer& p3, const Segment& p) const {
        const Rational lo = node.lo(p3), hi = node.hi(p3);
        if (p.lo <= lo && p.hi >= hi) {
            Rational w(1);
            mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), node.m);
            return w;
        }
        const Rational& from = p.lo > lo ? p.lo : lo;
        const Rational& to = p.hi < hi ? p.hi : hi;
        return node_cdf(node, p3, to) - node_cdf(node, p3, from);
    }

    std::optional<Rational> leaf(const Node&, TargetGeometry&, const Integer&, const Integer&) const {
        return std::nullopt;
    }
};

/// Counts left endpoints a'/3^N of level N inside the target.
struct LeftEndpointVisitor {
    unsigned long N;

    Integer empty() const { return 0; }

    Integer single(const Node& node, const Integer& p3, const Segment& p) const {
        const Rational lo = node.lo(p3);
        if (node.m >= N) return p.contains(lo) ? Integer(1) : Integer(0);
        // a' = a 3^(N-m) + a''; a''/3^(N-m) = 3^m (a'/3^N - a/3^m)
        const Rational s(p3);
        return count_restricted(N - node.m, Rational((p.lo - lo) * s), Rational((p.hi - lo) * s), p.lo_open,
                                p.hi_open);
    }

    std::optional<Integer> leaf(const Node& node, TargetGeometry& geo, const Integer& b_min,
                                const Integer& b_max) const {
        if (node.m < N) return std::nullopt;
        const Rational x = node.lo(geo.pow3_at(node.m));
        for (Integer b = b_min; b <= b_max; ++b) {
            if (geo.piece(b).contains(x)) return Integer(1);
        }
        return Integer(0);
    }
};

} // namespace detail

/// mu(A_n^y(sigma)) exactly, by walking the construction tree of K.
inline MeasureValue measure_target(const ApproxTarget& t, TraversalBudget budget = {}) {
    t.validate();
    if (t.covers_unit()) return MeasureValue(Rational(1));
    detail::MeasureVisitor v;
    detail::CantorWalk walk(t, v, budget);
    return MeasureValue(walk.run());
}

/// |L_N n A_n^y(sigma)|.
inline Integer count_target_left_endpoints(unsigned long N, const ApproxTarget& t, TraversalBudget budget = {}) {
    t.validate();
    if (t.covers_unit()) return pow2(N);
    detail::LeftEndpointVisitor v{N};
    detail::CantorWalk walk(t, v, budget);
    return walk.run();
}

/// |C_N n A_n^y(sigma)|. Reflection x -> 1 - x maps A_n^y(sigma) onto A_n^-y(sigma),
/// so the right endpoints are counted as left endpoints of the mirrored target.
inline Integer count_target_endpoints(unsigned long N, const ApproxTarget& t, TraversalBudget budget = {}) {
    ApproxTarget mirrored = t;
    mirrored.y = -t.y;
    return count_target_left_endpoints(N, t, budget) + count_target_left_endpoints(N, mirrored, budget);
}

} // namespace cantor
