#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>

#include "sphuni/rng.hpp"

namespace sphuni {

/// Row-major so that observations (rows) are contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// An n x d dataset of points on S^(d-1). Immutable after construction and
/// safe to share across threads.
class UnitSample {
public:
    enum class Normalize {
        strict,       ///< rows must already have norm 1 within 1e-8
        renormalize,  ///< rescale rows on ingest
    };

    static constexpr double kNormTolerance = 1e-8;

    explicit UnitSample(Matrix points, Normalize mode = Normalize::strict);

    const Matrix& points() const { return points_; }
    std::size_t size_n() const { return static_cast<std::size_t>(points_.rows()); }
    int dim_d() const { return static_cast<int>(points_.cols()); }

private:
    Matrix points_;
};

/// n iid uniform points on S^(d-1), by normalizing d-variate standard
/// Gaussian draws.
UnitSample sample_uniform_sphere(std::size_t n, int d, const SeedSpec& seed);

/// All pairwise cosines x_i' x_j: symmetric, unit diagonal, entries clamped
/// to [-1, 1] so downstream arccos never sees 1 + eps.
Matrix gram_cosines(const UnitSample& sample);

/// Reads one observation per line, d whitespace- or comma-separated decimal
/// coordinates; lines starting with '#' are ignored.
UnitSample load_unit_sample(const std::filesystem::path& path,
                            UnitSample::Normalize mode = UnitSample::Normalize::strict);

}  // namespace sphuni
