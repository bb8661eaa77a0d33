#pragma once

#include "pmcvol/pmc/posterior.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pmcvol::pmc {

/// A PMC over N hidden states and a finite alphabet of M observation symbols, given by
/// explicit probability tables. Used as a ground-truth model for the filtering recursion.
struct ExplicitPmc {
    std::size_t n_states = 0;
    std::size_t n_symbols = 0;
    /// p(x_1, y_1), index x * M + y.
    std::vector<double> initial;
    /// p(x', y' | x, y), row (x * M + y), column (x' * M + y'), row-major.
    std::vector<double> transition;

    [[nodiscard]] std::size_t pair_index(std::size_t x, std::size_t y) const { return x * n_symbols + y; }
    [[nodiscard]] double init(std::size_t x, std::size_t y) const { return initial[pair_index(x, y)]; }
    [[nodiscard]] double trans(std::size_t x, std::size_t y, std::size_t x2, std::size_t y2) const {
        return transition[pair_index(x, y) * n_states * n_symbols + pair_index(x2, y2)];
    }

    /// Throws InvalidInput unless the tables are sized right and every row sums to 1 within 1e-12.
    void validate() const;
};

/// Strictly positive random tables (entries drawn U(0.05, 1) then row-normalized).
ExplicitPmc random_explicit_pmc(std::size_t n_states, std::size_t n_symbols, std::uint64_t seed);

/// HMC-structured tables: p(x',y'|x,y) = A[x][x'] B[x'][y'], p(x_1,y_1) = pi[x] B[x][y].
ExplicitPmc hmc_structured_pmc(std::span<const double> pi, std::span<const double> a,
                               std::span<const double> b, std::size_t n_states, std::size_t n_symbols);

/// p(x_1 | y_1) from the initial table.
FilteredPosterior first_posterior(const ExplicitPmc& model, std::size_t y1);

/// Observation-law recursion: alpha_{t+1}(x') = sum_x alpha_t(x) p(x'|x,y_t) p(y_{t+1}|x,y_t,x'),
/// normalized into p(x_t | y_{1:t}). Throws DegenerateData on zero evidence.
std::vector<FilteredPosterior> forward_recursion_posterior(const ExplicitPmc& model,
                                                           std::span<const std::size_t> ys);

/// Marginalizes the joint over every hidden path x_{1:t}, for each t. Exponential in T;
/// limited to T <= 10 and N <= 4.
std::vector<FilteredPosterior> brute_force_posterior(const ExplicitPmc& model,
                                                     std::span<const std::size_t> ys);

/// Exact observation-law-free weight built from the tables by marginalization:
///   w(x, x', y, y') = [p(x|y,y') / p(x|y)] * p(x'|x,y,y')
/// with the one-step joint taken as p(x_1,y_1) p(x_2,y_2|x_1,y_1). Any factor depending on
/// (y, y') alone cancels in the posterior normalization.
class ExactWeightFunction {
public:
    explicit ExactWeightFunction(const ExplicitPmc& model);

    /// Throws DegenerateData when a conditioning event has probability zero.
    [[nodiscard]] double operator()(std::size_t from, std::size_t to, std::size_t yt, std::size_t ynext) const;

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<double> table_;  // [y][y'][x][x'], NaN marks an undefined conditional
};

ExactWeightFunction explicit_to_weightnet(const ExplicitPmc& model);

/// p(x_1|y_1) followed by gamma_step with the exact weight function.
std::vector<FilteredPosterior> recursion_posterior(const ExplicitPmc& model,
                                                   std::span<const std::size_t> ys);

/// g(x, y) = E[value(y_{t+1}) | x_t = x, y_t = y], row-major [x * M + y].
std::vector<double> conditional_means(const ExplicitPmc& model, std::span<const double> symbol_values);

/// E[value(y_{t+1}) | y_{1:t}] for t = 1..T-1 by enumeration over hidden paths.
std::vector<double> brute_force_predictive_means(const ExplicitPmc& model, std::span<const std::size_t> ys,
                                                 std::span<const double> symbol_values);

}  // namespace pmcvol::pmc
