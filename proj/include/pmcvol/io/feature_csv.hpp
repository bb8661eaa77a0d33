#pragma once

#include "pmcvol/data/features.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace pmcvol::io {

/// Header `index,sigma2,u60sq,sigma2_norm,u60sq_norm`; normalized columns are left empty
/// when the series is not normalized.
void write_features_csv(std::ostream& out, const data::FeatureSeries& series);

/// Reads the raw sigma2 and u60sq columns back. Throws InvalidInput("line N: ...") on a bad
/// header, a malformed or negative value, or an index that is not 0, 1, 2, ...
std::vector<data::VolatilitySample> read_features_csv(std::istream& in);
std::vector<data::VolatilitySample> read_features_csv(const std::filesystem::path& path);

/// Posterior trajectory `t,pred,state0..stateN-1,argmax`. Row t holds p(x_t | y_{1:t}) and the
/// normalized-scale forecast of sigma2_{t+1} made from it.
void write_trajectory_csv(std::ostream& out, std::span<const double> predictions,
                          const std::vector<std::vector<double>>& posteriors);

}  // namespace pmcvol::io
