#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "cantor/error.hpp"
#include "cantor/rational.hpp"

namespace cantor {

/// One subinterval of [0,1] with independently open or closed ends.
struct Segment {
    Rational lo;
    Rational hi;
    bool lo_open = false;
    bool hi_open = false;

    static Segment closed(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), false, false}; }
    static Segment open(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), true, true}; }

    bool empty() const { return lo > hi || (lo == hi && (lo_open || hi_open)); }

    bool contains(const Rational& x) const {
        bool above = lo_open ? x > lo : x >= lo;
        bool below = hi_open ? x < hi : x <= hi;
        return above && below;
    }

    /// Intersection with [0,1]; an end cut by the clip becomes closed.
    std::optional<Segment> clipped_to_unit() const {
        Segment s = *this;
        if (s.lo < 0) {
            s.lo = 0;
            s.lo_open = false;
        }
        if (s.hi > 1) {
            s.hi = 1;
            s.hi_open = false;
        }
        if (s.empty()) return std::nullopt;
        return s;
    }

    /// The image under x -> 1 - x.
    Segment reflected() const { return {1 - hi, 1 - lo, hi_open, lo_open}; }

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Finite union of pairwise disjoint subintervals of [0,1], sorted by left end.
/// Construction normalizes: empties dropped, overlapping or touching pieces merged.
class IntervalUnion {
public:
    IntervalUnion() = default;

    explicit IntervalUnion(std::vector<Segment> pieces) {
        for (const auto& s : pieces) {
            if (s.lo > s.hi) throw DomainError("IntervalUnion: segment with lo > hi");
            if (s.lo < 0 || s.hi > 1) throw DomainError("IntervalUnion: segment outside [0,1]");
        }
        std::erase_if(pieces, [](const Segment& s) { return s.empty(); });
        std::sort(pieces.begin(), pieces.end(), [](const Segment& a, const Segment& b) {
            if (a.lo != b.lo) return a.lo < b.lo;
            return !a.lo_open && b.lo_open;
        });
        for (auto& s : pieces) {
            if (segments_.empty()) {
                segments_.push_back(std::move(s));
                continue;
            }
            Segment& cur = segments_.back();
            bool joins = s.lo < cur.hi || (s.lo == cur.hi && (!cur.hi_open || !s.lo_open));
            if (!joins) {
                segments_.push_back(std::move(s));
                continue;
            }
            if (s.lo == cur.lo) cur.lo_open = cur.lo_open && s.lo_open;
            if (s.hi > cur.hi) {
                cur.hi = s.hi;
                cur.hi_open = s.hi_open;
            } else if (s.hi == cur.hi) {
                cur.hi_open = cur.hi_open && s.hi_open;
            }
        }
    }

    /// Clips every piece to [0,1] before normalizing.
    static IntervalUnion clipped(const std::vector<Segment>& pieces) {
        std::vector<Segment> kept;
        kept.reserve(pieces.size());
        for (const auto& s : pieces) {
            if (auto c = s.clipped_to_unit()) kept.push_back(std::move(*c));
        }
        return IntervalUnion(std::move(kept));
    }

    static IntervalUnion unit() { return IntervalUnion({Segment::closed(0, 1)}); }

    const std::vector<Segment>& segments() const { return segments_; }
    std::size_t size() const { return segments_.size(); }
    bool empty() const { return segments_.empty(); }

    bool contains(const Rational& x) const {
        return std::any_of(segments_.begin(), segments_.end(), [&](const Segment& s) { return s.contains(x); });
    }

    /// Image under x -> 1 - x.
    IntervalUnion reflected() const {
        std::vector<Segment> r;
        r.reserve(segments_.size());
        for (const auto& s : segments_) r.push_back(s.reflected());
        return IntervalUnion(std::move(r));
    }

    /// Every piece of *this lies inside some piece of `outer`.
    bool subset_of(const IntervalUnion& outer) const {
        for (const auto& s : segments_) {
            bool inside = std::any_of(outer.segments_.begin(), outer.segments_.end(), [&](const Segment& o) {
                bool lo_ok = o.lo < s.lo || (o.lo == s.lo && (!o.lo_open || s.lo_open));
                bool hi_ok = o.hi > s.hi || (o.hi == s.hi && (!o.hi_open || s.hi_open));
                return lo_ok && hi_ok;
            });
            if (!inside) return false;
        }
        return true;
    }

    friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

private:
    std::vector<Segment> segments_;
};

} // namespace cantor
