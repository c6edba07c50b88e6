#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace idt {

struct MeasureAtom {
    double location = 0.0;
    double mass = 0.0;
};

// Constant density `level` on [lo, hi).
struct DensityPiece {
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.0;
};

// Compactly supported measure on [0,inf): finitely many atoms plus piecewise
// constant density. The tail h -> mu([h,inf)) is exact and piecewise affine.
struct MeasureHalfLine {
    std::vector<MeasureAtom> atoms;
    std::vector<DensityPiece> pieces;

    static MeasureHalfLine dirac(double location, double mass = 1.0) {
        MeasureHalfLine m;
        m.atoms.push_back({location, mass});
        m.validate();
        return m;
    }
    static MeasureHalfLine lebesgue(double lo, double hi, double level = 1.0) {
        MeasureHalfLine m;
        m.pieces.push_back({lo, hi, level});
        m.validate();
        return m;
    }

    MeasureHalfLine& add_atom(double location, double mass) {
        atoms.push_back({location, mass});
        validate();
        return *this;
    }

    void validate() const {
        bool any = false;
        for (const auto& a : atoms) {
            if (a.location < 0.0) throw std::invalid_argument("measure: atom locations must be >= 0");
            if (a.mass <= 0.0) throw std::invalid_argument("measure: atom masses must be > 0");
            any = true;
        }
        for (const auto& p : pieces) {
            if (p.lo < 0.0 || !(p.hi > p.lo)) throw std::invalid_argument("measure: density pieces need 0 <= lo < hi");
            if (p.level < 0.0) throw std::invalid_argument("measure: density levels must be >= 0");
            if (!std::isfinite(p.hi)) throw std::invalid_argument("measure: support must be compact");
            if (p.level > 0.0) any = true;
        }
        if (!any) throw std::invalid_argument("measure: must carry positive mass");
    }

    // H with supp(mu) in [0,H].
    double support_bound() const {
        double h = 0.0;
        for (const auto& a : atoms) h = std::max(h, a.location);
        for (const auto& p : pieces) h = std::max(h, p.hi);
        return h;
    }

    // mu([h, inf)), exact.
    double tail(double h) const {
        double v = 0.0;
        for (const auto& a : atoms)
            if (a.location >= h) v += a.mass;
        for (const auto& p : pieces) {
            const double lo = std::max(p.lo, h);
            if (lo < p.hi) v += p.level * (p.hi - lo);
        }
        return v;
    }

    double total_mass() const { return tail(0.0); }

    // Sorted breakpoints of the tail function on [0, H]; the tail is affine
    // on each open interval between consecutive entries.
    std::vector<double> tail_breakpoints() const {
        std::vector<double> b = {0.0, support_bound()};
        for (const auto& a : atoms) b.push_back(a.location);
        for (const auto& p : pieces) {
            b.push_back(p.lo);
            b.push_back(p.hi);
        }
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    }

    // Total density level over the open interval around h (the negative of the
    // tail's slope there).
    double density_level(double h) const {
        double v = 0.0;
        for (const auto& p : pieces)
            if (h > p.lo && h < p.hi) v += p.level;
        return v;
    }
};

}  // namespace idt
