/* potential.hpp -- the function f on the shift, evaluated as enclosures over
 * cylinder windows.
 *
 * Classical kind: f(theta) = [a_0; a_1, ...] + [0; a_-1, a_-2, ...] with the
 * digit-cap tail interval [1/(N+1), 1] on both arms; arm values are composed
 * by exact interval Moebius steps, so enclosures are exact rationals.
 *
 * Table kind: f depends only on the (2w+1)-word centered at 0; declared
 * variation constants kappa, rho bound var_k(f) <= kappa*rho^k and are
 * validated against the table where checkable.
 */

#ifndef SPECTRA_POTENTIAL_HPP_
#define SPECTRA_POTENTIAL_HPP_

#include <map>
#include <optional>

#include "spectra/geometry.hpp"
#include "spectra/model.hpp"

namespace spectra {

struct CylinderWindow {
    Word word;
    size_t center = 0;  // index of the 0-th position inside `word`

    CylinderWindow(Word w, size_t c) : word(std::move(w)), center(c) {
        if (word.empty() || center >= word.size())
            throw std::invalid_argument("CylinderWindow: center out of range");
    }
};

class PotentialSpec {
public:
    static PotentialSpec classical();
    static PotentialSpec table(int radius, std::map<Word, Rational> values,
                               Rational kappa, Rational rho);

    bool is_classical() const { return kind_ == Kind::classical; }
    int radius() const { return radius_; }
    const Rational& kappa() const { return kappa_; }
    const Rational& rho() const { return rho_; }
    const std::map<Word, Rational>& values() const { return values_; }

    // Completeness of the table over all admissible (2w+1)-words and the
    // var_k <= kappa*rho^k consistency checks. Classical: always fine.
    void validate_against(const CantorModel& model) const;

    // Bound on |f(x)-f(y)| when the itineraries of x and y agree on all
    // positions within distance d of the evaluation point.
    Rational variation_bound(const CantorModel& model, long d) const;

    std::string canonical_description() const;

private:
    enum class Kind { classical, table };
    PotentialSpec(Kind k) : kind_(k) {}
    Kind kind_;
    int radius_ = 0;
    std::map<Word, Rational> values_;
    Rational kappa_ = 0, rho_ = 0;
};

// Enclosure of {f(theta) : theta admissible, theta extends win at its center}.
// Throws std::invalid_argument on inadmissible windows.
Enclosure window_bounds(const CylinderWindow& win, const PotentialSpec& pot,
                        const CantorModel& model);

// Enclosure of the Markov value sup_n f(sigma^n x) of a periodic point, of
// width <= tol: the period is unrolled until each phase's window is tight.
Enclosure markov_value_periodic(const PeriodicPoint& pp, const PotentialSpec& pot,
                                const CantorModel& model, const Rational& tol);
Enclosure markov_value_periodic(const Word& period_word, const PotentialSpec& pot,
                                const CantorModel& model, const Rational& tol);

// Lagrange value of the eventually periodic point preperiod.(period)^inf;
// the limsup discards the preperiod, but gluing is validated.
Enclosure lagrange_value_eventually_periodic(const Word& preperiod, const Word& period,
                                             const PotentialSpec& pot,
                                             const CantorModel& model,
                                             const Rational& tol);

}  // namespace spectra

#endif  // SPECTRA_POTENTIAL_HPP_
