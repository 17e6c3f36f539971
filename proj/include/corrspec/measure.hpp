#pragma once

#include <cstddef>
#include <vector>

namespace corrspec {

/// Discrete probability measure: atoms with matching weights.
struct DiscreteMeasure {
    std::vector<double> atoms;
    std::vector<double> weights;

    static DiscreteMeasure point_mass(double atom) { return {{atom}, {1.0}}; }

    /// Equal-weight measure on the given atoms.
    static DiscreteMeasure uniform_on(std::vector<double> atoms_in) {
        DiscreteMeasure m;
        m.atoms = std::move(atoms_in);
        m.weights.assign(m.atoms.size(), 1.0 / static_cast<double>(m.atoms.size()));
        return m;
    }

    double total_mass() const {
        double t = 0.0;
        for (double w : weights) t += w;
        return t;
    }

    bool has_atom_at(double x, double tol = 1e-12) const {
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (weights[i] > 0.0 && atoms[i] > x - tol && atoms[i] < x + tol) return true;
        }
        return false;
    }
};

} // namespace corrspec
