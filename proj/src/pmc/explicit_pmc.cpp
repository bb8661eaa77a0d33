#include "pmcvol/pmc/explicit_pmc.hpp"

#include "pmcvol/errors.hpp"
#include "pmcvol/pmc/pmc_model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace pmcvol::pmc {

namespace {

void check_symbols(const ExplicitPmc& model, std::span<const std::size_t> ys) {
    if (ys.empty()) {
        throw InvalidInput("observation sequence is empty");
    }
    for (auto y : ys) {
        if (y >= model.n_symbols) {
            throw InvalidInput("observation symbol " + std::to_string(y) + " outside the alphabet");
        }
    }
}

FilteredPosterior normalized(std::vector<double> mass, const char* what) {
    double total = 0.0;
    for (double v : mass) {
        total += v;
    }
    if (!(total > 0.0)) {
        throw DegenerateData(std::string(what) + ": observation sequence has zero probability");
    }
    for (auto& v : mass) {
        v /= total;
    }
    return FilteredPosterior(std::move(mass));
}

/// Joint p(x_{1:t}, y_{1:t}) of one path, digits of `code` in base N (x_1 least significant).
double path_joint(const ExplicitPmc& model, std::span<const std::size_t> ys, std::size_t t,
                  std::size_t code, std::size_t* last_state) {
    std::size_t x = code % model.n_states;
    code /= model.n_states;
    double p = model.init(x, ys[0]);
    for (std::size_t s = 1; s < t; ++s) {
        const std::size_t x2 = code % model.n_states;
        code /= model.n_states;
        p *= model.trans(x, ys[s - 1], x2, ys[s]);
        x = x2;
    }
    *last_state = x;
    return p;
}

std::size_t path_count(std::size_t n, std::size_t t) {
    std::size_t c = 1;
    for (std::size_t i = 0; i < t; ++i) {
        c *= n;
    }
    return c;
}

void check_enumerable(const ExplicitPmc& model, std::size_t length) {
    if (length > 10 || model.n_states > 4) {
        throw InvalidInput("enumeration is limited to T <= 10 and N <= 4");
    }
}

}  // namespace

void ExplicitPmc::validate() const {
    const std::size_t k = n_states * n_symbols;
    if (n_states == 0 || n_symbols == 0 || initial.size() != k || transition.size() != k * k) {
        throw InvalidInput("explicit PMC tables have inconsistent sizes");
    }
    auto check_row = [](std::span<const double> row) {
        double total = 0.0;
        for (double v : row) {
            if (!(v >= 0.0)) {
                throw InvalidInput("explicit PMC table has a negative entry");
            }
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw InvalidInput("explicit PMC table row sums to " + std::to_string(total));
        }
    };
    check_row(initial);
    for (std::size_t r = 0; r < k; ++r) {
        check_row(std::span<const double>(transition).subspan(r * k, k));
    }
}

ExplicitPmc random_explicit_pmc(std::size_t n_states, std::size_t n_symbols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    ExplicitPmc m;
    m.n_states = n_states;
    m.n_symbols = n_symbols;
    const std::size_t k = n_states * n_symbols;
    auto fill_row = [&](double* row) {
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            row[i] = u(rng);
            total += row[i];
        }
        for (std::size_t i = 0; i < k; ++i) {
            row[i] /= total;
        }
    };
    m.initial.resize(k);
    fill_row(m.initial.data());
    m.transition.resize(k * k);
    for (std::size_t r = 0; r < k; ++r) {
        fill_row(m.transition.data() + r * k);
    }
    return m;
}

ExplicitPmc hmc_structured_pmc(std::span<const double> pi, std::span<const double> a,
                               std::span<const double> b, std::size_t n_states, std::size_t n_symbols) {
    ExplicitPmc m;
    m.n_states = n_states;
    m.n_symbols = n_symbols;
    const std::size_t k = n_states * n_symbols;
    m.initial.resize(k);
    m.transition.resize(k * k);
    for (std::size_t x = 0; x < n_states; ++x) {
        for (std::size_t y = 0; y < n_symbols; ++y) {
            m.initial[m.pair_index(x, y)] = pi[x] * b[x * n_symbols + y];
            for (std::size_t x2 = 0; x2 < n_states; ++x2) {
                for (std::size_t y2 = 0; y2 < n_symbols; ++y2) {
                    m.transition[m.pair_index(x, y) * k + m.pair_index(x2, y2)] =
                        a[x * n_states + x2] * b[x2 * n_symbols + y2];
                }
            }
        }
    }
    return m;
}

FilteredPosterior first_posterior(const ExplicitPmc& model, std::size_t y1) {
    std::vector<double> mass(model.n_states);
    for (std::size_t x = 0; x < model.n_states; ++x) {
        mass[x] = model.init(x, y1);
    }
    return normalized(std::move(mass), "first_posterior");
}

std::vector<FilteredPosterior> forward_recursion_posterior(const ExplicitPmc& model,
                                                           std::span<const std::size_t> ys) {
    model.validate();
    check_symbols(model, ys);
    const std::size_t n = model.n_states;
    std::vector<FilteredPosterior> out;
    std::vector<double> alpha(n);
    for (std::size_t x = 0; x < n; ++x) {
        alpha[x] = model.init(x, ys[0]);
    }
    out.push_back(normalized(alpha, "forward recursion"));
    for (std::size_t t = 0; t + 1 < ys.size(); ++t) {
        std::vector<double> next(n, 0.0);
        for (std::size_t x = 0; x < n; ++x) {
            // p(x'|x,y_t) and p(y_{t+1}|x,y_t,x') from the pair transition
            for (std::size_t x2 = 0; x2 < n; ++x2) {
                double p_state = 0.0;
                for (std::size_t y2 = 0; y2 < model.n_symbols; ++y2) {
                    p_state += model.trans(x, ys[t], x2, y2);
                }
                if (p_state == 0.0) {
                    continue;
                }
                const double p_obs = model.trans(x, ys[t], x2, ys[t + 1]) / p_state;
                next[x2] += alpha[x] * p_state * p_obs;
            }
        }
        // rescaling does not change the normalized posterior
        double total = 0.0;
        for (double v : next) {
            total += v;
        }
        if (!(total > 0.0)) {
            throw DegenerateData("forward recursion: observation sequence has zero probability");
        }
        for (auto& v : next) {
            v /= total;
        }
        alpha = next;
        out.push_back(normalized(alpha, "forward recursion"));
    }
    return out;
}

std::vector<FilteredPosterior> brute_force_posterior(const ExplicitPmc& model,
                                                     std::span<const std::size_t> ys) {
    model.validate();
    check_symbols(model, ys);
    check_enumerable(model, ys.size());
    std::vector<FilteredPosterior> out;
    for (std::size_t t = 1; t <= ys.size(); ++t) {
        std::vector<double> mass(model.n_states, 0.0);
        const std::size_t paths = path_count(model.n_states, t);
        for (std::size_t code = 0; code < paths; ++code) {
            std::size_t last = 0;
            const double p = path_joint(model, ys, t, code, &last);
            mass[last] += p;
        }
        out.push_back(normalized(std::move(mass), "enumeration"));
    }
    return out;
}

ExactWeightFunction::ExactWeightFunction(const ExplicitPmc& model)
    : n_(model.n_states), m_(model.n_symbols) {
    model.validate();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    table_.assign(m_ * m_ * n_ * n_, nan);
    for (std::size_t y = 0; y < m_; ++y) {
        double q_y = 0.0;  // p(y_t = y)
        for (std::size_t x = 0; x < n_; ++x) {
            q_y += model.init(x, y);
        }
        for (std::size_t y2 = 0; y2 < m_; ++y2) {
            // one-step joint J(x, y, x', y') = p(x, y) p(x', y' | x, y)
            auto joint = [&](std::size_t x, std::size_t x2) { return model.init(x, y) * model.trans(x, y, x2, y2); };
            double q_yy = 0.0;  // p(y_t = y, y_{t+1} = y2)
            for (std::size_t x = 0; x < n_; ++x) {
                for (std::size_t x2 = 0; x2 < n_; ++x2) {
                    q_yy += joint(x, x2);
                }
            }
            for (std::size_t x = 0; x < n_; ++x) {
                double q_xyy = 0.0;  // p(x_t = x, y, y2)
                for (std::size_t x2 = 0; x2 < n_; ++x2) {
                    q_xyy += joint(x, x2);
                }
                if (q_y == 0.0 || q_yy == 0.0 || q_xyy == 0.0 || model.init(x, y) == 0.0) {
                    continue;
                }
                const double p_x_given_yy = q_xyy / q_yy;
                const double p_x_given_y = model.init(x, y) / q_y;
                for (std::size_t x2 = 0; x2 < n_; ++x2) {
                    const double p_next = joint(x, x2) / q_xyy;
                    table_[((y * m_ + y2) * n_ + x) * n_ + x2] = (p_x_given_yy / p_x_given_y) * p_next;
                }
            }
        }
    }
}

double ExactWeightFunction::operator()(std::size_t from, std::size_t to, std::size_t yt,
                                       std::size_t ynext) const {
    const double w = table_[((yt * m_ + ynext) * n_ + from) * n_ + to];
    if (std::isnan(w)) {
        throw DegenerateData("exact weight: conditioning event (x=" + std::to_string(from) +
                             ", y=" + std::to_string(yt) + ", y'=" + std::to_string(ynext) +
                             ") has probability zero");
    }
    return w;
}

ExactWeightFunction explicit_to_weightnet(const ExplicitPmc& model) { return ExactWeightFunction(model); }

std::vector<FilteredPosterior> recursion_posterior(const ExplicitPmc& model,
                                                   std::span<const std::size_t> ys) {
    check_symbols(model, ys);
    const auto w = explicit_to_weightnet(model);
    std::vector<FilteredPosterior> out;
    out.push_back(first_posterior(model, ys[0]));
    for (std::size_t t = 0; t + 1 < ys.size(); ++t) {
        out.push_back(gamma_step(out.back(), ys[t], ys[t + 1], w));
    }
    return out;
}

std::vector<double> conditional_means(const ExplicitPmc& model, std::span<const double> symbol_values) {
    if (symbol_values.size() != model.n_symbols) {
        throw InvalidInput("need one value per observation symbol");
    }
    std::vector<double> g(model.n_states * model.n_symbols, 0.0);
    for (std::size_t x = 0; x < model.n_states; ++x) {
        for (std::size_t y = 0; y < model.n_symbols; ++y) {
            double acc = 0.0;
            for (std::size_t x2 = 0; x2 < model.n_states; ++x2) {
                for (std::size_t y2 = 0; y2 < model.n_symbols; ++y2) {
                    acc += model.trans(x, y, x2, y2) * symbol_values[y2];
                }
            }
            g[model.pair_index(x, y)] = acc;
        }
    }
    return g;
}

std::vector<double> brute_force_predictive_means(const ExplicitPmc& model, std::span<const std::size_t> ys,
                                                 std::span<const double> symbol_values) {
    model.validate();
    check_symbols(model, ys);
    check_enumerable(model, ys.size());
    if (symbol_values.size() != model.n_symbols) {
        throw InvalidInput("need one value per observation symbol");
    }
    std::vector<double> out;
    for (std::size_t t = 1; t < ys.size(); ++t) {
        double evidence = 0.0;
        double weighted = 0.0;
        const std::size_t paths = path_count(model.n_states, t);
        for (std::size_t code = 0; code < paths; ++code) {
            std::size_t last = 0;
            const double p = path_joint(model, ys, t, code, &last);
            double next_mean = 0.0;
            for (std::size_t x2 = 0; x2 < model.n_states; ++x2) {
                for (std::size_t y2 = 0; y2 < model.n_symbols; ++y2) {
                    next_mean += model.trans(last, ys[t - 1], x2, y2) * symbol_values[y2];
                }
            }
            evidence += p;
            weighted += p * next_mean;
        }
        if (!(evidence > 0.0)) {
            throw DegenerateData("predictive mean: observation sequence has zero probability");
        }
        out.push_back(weighted / evidence);
    }
    return out;
}

}  // namespace pmcvol::pmc
