#include "psmatch/rng.hpp"

#include "psmatch/stats.hpp"

namespace psmatch {

double Rng::normal() {
    return norm_quantile(uniform());
}

} // namespace psmatch
