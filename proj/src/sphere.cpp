#include "sphuni/sphere.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphuni {

UnitSample::UnitSample(Matrix points, Normalize mode) : points_(std::move(points)) {
    if (points_.rows() < 1) throw std::invalid_argument("UnitSample: need at least one observation");
    if (points_.cols() < 2) throw std::invalid_argument("UnitSample: dimension d must be >= 2");
    for (Eigen::Index i = 0; i < points_.rows(); ++i) {
        const double norm = points_.row(i).norm();
        if (mode == Normalize::strict) {
            if (std::abs(norm - 1.0) > kNormTolerance)
                throw std::invalid_argument("UnitSample: row " + std::to_string(i) + " has norm " +
                                            std::to_string(norm) + "; pass Normalize::renormalize to rescale");
        } else {
            if (!(norm > 0.0) || !std::isfinite(norm))
                throw std::invalid_argument("UnitSample: row " + std::to_string(i) +
                                            " cannot be renormalized (norm " + std::to_string(norm) + ")");
            points_.row(i) /= norm;
        }
    }
}

UnitSample sample_uniform_sphere(std::size_t n, int d, const SeedSpec& seed) {
    if (n < 1) throw std::invalid_argument("sample_uniform_sphere: n must be >= 1");
    if (d < 2) throw std::invalid_argument("sample_uniform_sphere: d must be >= 2");
    Rng rng(seed);
    Matrix pts(static_cast<Eigen::Index>(n), d);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        double norm2;
        do {
            for (int c = 0; c < d; ++c) pts(i, c) = rng.normal();
            norm2 = pts.row(i).squaredNorm();
        } while (norm2 <= 0.0);
        pts.row(i) /= std::sqrt(norm2);
    }
    return UnitSample(std::move(pts), UnitSample::Normalize::renormalize);
}

Matrix gram_cosines(const UnitSample& sample) {
    const Matrix& x = sample.points();
    Matrix gram = x * x.transpose();
    gram = gram.cwiseMax(-1.0).cwiseMin(1.0);
    return gram;
}

UnitSample load_unit_sample(const std::filesystem::path& path, UnitSample::Normalize mode) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sample file: " + path.string());

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream fields(line);
        std::vector<double> row;
        double v;
        while (fields >> v) row.push_back(v);
        if (!fields.eof())
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": non-numeric field");
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(rows.front().size()) + " coordinates, got " +
                                     std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path.string() + ": no observations");

    Matrix pts(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
        for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return UnitSample(std::move(pts), mode);
}

}  // namespace sphuni
