#pragma once

#include <string>

#include "errors.hpp"
#include "field.hpp"

namespace qwilson {

// The parameter tuple (q, a, b, c, d, e, f) subject to b*c*d*e*f = 1.
// All evaluators read parameters from here; the constraint is enforced at
// construction so every evaluated point lies on the parameter variety.
template <ExactField F>
struct Params {
    F q, a, b, c, d, e, f;

    Params(F q, F a, F b, F c, F d, F e, F f)
        : q(std::move(q)), a(std::move(a)), b(std::move(b)), c(std::move(c)), d(std::move(d)),
          e(std::move(e)), f(std::move(f)) {
        for (const F* x : {&this->q, &this->a, &this->b, &this->c, &this->d, &this->e, &this->f}) {
            if (x->is_zero()) throw InvalidInput("parameters must be nonzero");
        }
        if (this->q == F(1) || this->q == F(-1)) throw InvalidInput("q must not be a sign");
        if (!(this->b * this->c * this->d * this->e * this->f == F(1)))
            throw InvalidInput("parameter constraint b*c*d*e*f = 1 violated");
    }

    // Convenience constructor solving the constraint for f.
    static Params with_dependent_f(F q, F a, F b, F c, F d, F e) {
        F f = (b * c * d * e).inv();
        return Params(std::move(q), std::move(a), std::move(b), std::move(c), std::move(d),
                      std::move(e), std::move(f));
    }

    // The difference-operator side of every statement is the recurrence side
    // with the roles of b and c exchanged.
    Params swap_bc() const { return Params(q, a, c, b, d, e, f); }
};

}  // namespace qwilson
