#include "pmcvol/pmc/posterior.hpp"

#include <string>

namespace pmcvol::pmc {

FilteredPosterior::FilteredPosterior(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw InvalidInput("posterior needs at least one state");
    }
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw InvalidInput("posterior entries must be finite and nonnegative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidInput("posterior sums to " + std::to_string(total));
    }
}

FilteredPosterior FilteredPosterior::uniform(std::size_t n_states) {
    return FilteredPosterior(std::vector<double>(n_states, 1.0 / static_cast<double>(n_states)));
}

std::size_t FilteredPosterior::argmax() const {
    return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

}  // namespace pmcvol::pmc
