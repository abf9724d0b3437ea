#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tsh/error.hpp"

namespace tsh {

/// Principal axes of a training matrix. `components` holds one unit-norm
/// direction per row, sorted by descending explained variance.
struct PcaModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd components;
    Eigen::VectorXd explained_variance;

    std::size_t n_components() const noexcept { return static_cast<std::size_t>(components.rows()); }
    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

/// Top right singular vectors of the centred data. The requested count is
/// clamped to the numerical rank (and to rows - 1). Each component is signed
/// so that its largest-magnitude coordinate is positive.
inline PcaModel fit_pca(const Eigen::MatrixXd& rows, std::size_t k)
{
    if (rows.rows() < 2) throw Error(ErrorKind::InsufficientData, "PCA needs at least two rows");
    if (k < 1) throw Error(ErrorKind::Config, "PCA needs at least one component");

    PcaModel model;
    model.mean = rows.colwise().mean().transpose();
    Eigen::MatrixXd centred = rows.rowwise() - model.mean.transpose();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double n = static_cast<double>(rows.rows());
    const double tol = s.size() > 0 ? s(0) * static_cast<double>(std::max(rows.rows(), rows.cols())) *
                                          std::numeric_limits<double>::epsilon()
                                    : 0.0;
    std::size_t rank = 0;
    while (rank < static_cast<std::size_t>(s.size()) && s(static_cast<Eigen::Index>(rank)) > tol) ++rank;

    const std::size_t eff = std::min({k, rank, static_cast<std::size_t>(rows.rows() - 1),
                                      static_cast<std::size_t>(rows.cols())});
    const auto keff = static_cast<Eigen::Index>(eff);
    model.components = svd.matrixV().leftCols(keff).transpose();
    model.explained_variance = s.head(keff).array().square() / (n - 1.0);

    for (Eigen::Index c = 0; c < keff; ++c) {
        Eigen::Index arg = 0;
        model.components.row(c).cwiseAbs().maxCoeff(&arg);
        if (model.components(c, arg) < 0) model.components.row(c) *= -1.0;
    }
    return model;
}

inline Eigen::VectorXd apply_pca(const PcaModel& model, const Eigen::VectorXd& v)
{
    if (v.size() != model.mean.size())
        throw Error(ErrorKind::Validation, "vector length does not match the fitted PCA input dimension");
    return model.components * (v - model.mean);
}

inline std::vector<double> apply_pca(const PcaModel& model, std::span<const double> v)
{
    Eigen::Map<const Eigen::VectorXd> mapped(v.data(), static_cast<Eigen::Index>(v.size()));
    Eigen::VectorXd out = apply_pca(model, Eigen::VectorXd(mapped));
    return {out.data(), out.data() + out.size()};
}

/// Row-wise projection of a matrix.
inline Eigen::MatrixXd apply_pca(const PcaModel& model, const Eigen::MatrixXd& rows)
{
    if (rows.cols() != model.mean.size())
        throw Error(ErrorKind::Validation, "matrix width does not match the fitted PCA input dimension");
    return (rows.rowwise() - model.mean.transpose()) * model.components.transpose();
}

} // namespace tsh
