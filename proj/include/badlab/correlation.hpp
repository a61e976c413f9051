#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "badlab/error.hpp"
#include "badlab/linalg.hpp"

namespace badlab {

// Labelled symmetric correlation matrix. Entries that could not be estimated
// (zero variance, too few complete pairs) are nullopt rather than NaN.
struct CorrelationMatrix {
    std::vector<std::string> labels;
    std::vector<std::optional<double>> values;  // row-major, labels.size()^2

    std::size_t size() const { return labels.size(); }

    std::optional<double> at(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
    void set(std::size_t i, std::size_t j, std::optional<double> v) {
        values[i * size() + j] = v;
        values[j * size() + i] = v;
    }

    std::optional<std::size_t> find(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return i;
        return std::nullopt;
    }

    static CorrelationMatrix identity(std::vector<std::string> labels) {
        CorrelationMatrix c;
        c.labels = std::move(labels);
        c.values.assign(c.size() * c.size(), 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) c.values[i * c.size() + i] = 1.0;
        return c;
    }

    static CorrelationMatrix from_matrix(std::vector<std::string> labels, const Matrix& m) {
        if (m.rows() != labels.size() || m.cols() != labels.size())
            throw ArgumentError("correlation matrix shape does not match labels");
        CorrelationMatrix c;
        c.labels = std::move(labels);
        c.values.resize(c.size() * c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j) c.values[i * c.size() + j] = m(i, j);
        return c;
    }

    // Throws when any entry is undefined.
    Matrix to_matrix() const {
        Matrix m(size(), size());
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j) {
                const auto v = at(i, j);
                if (!v)
                    throw DomainError("correlation between " + labels[i] + " and " + labels[j] +
                                      " is undefined");
                m(i, j) = *v;
            }
        return m;
    }
};

// Checks symmetry, unit diagonal, range and positive semi-definiteness.
inline void validate_correlation(const Matrix& corr, double tol = 1e-12) {
    const std::size_t n = corr.rows();
    if (corr.cols() != n) throw DomainError("correlation matrix is not square");
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(corr(i, i) - 1.0) > tol)
            throw DomainError("correlation matrix diagonal entry " + std::to_string(i) + " is not 1");
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(corr(i, j) - corr(j, i)) > tol)
                throw DomainError("correlation matrix is not symmetric");
            if (corr(i, j) < -1.0 - tol || corr(i, j) > 1.0 + tol)
                throw DomainError("correlation entry outside [-1, 1]");
        }
    }
    const auto eig = symmetric_eigen(corr);
    if (!eig.values.empty() && eig.values.front() < -1e-10)
        throw DomainError("correlation matrix is not positive semi-definite (min eigenvalue " +
                          std::to_string(eig.values.front()) + ")");
}

} // namespace badlab
