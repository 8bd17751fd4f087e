#pragma once

// Dense complex-matrix kernel: structural validation of unitaries and
// projective measurements, and the real coordinate system on Hermitian
// matrices given by an orthonormal (Hilbert-Schmidt) Gell-Mann basis.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfa/errors.hpp"

namespace qfa {

using complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Tolerance for structural checks (unitarity, projector algebra, PSD).
inline constexpr double tol_valid = 1e-10;
/// Tolerance for round-trip identities (vectorize/devectorize).
inline constexpr double tol_roundtrip = 1e-12;

inline double max_abs(const ComplexMatrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix& m)
{
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const complex z = m.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            return false;
    }
    return true;
}

/// |i><i| in dimension n.
inline ComplexMatrix basis_projector(std::size_t i, std::size_t n)
{
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    p(i, i) = 1.0;
    return p;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = tol_valid)
{
    return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

/// True iff ||m^dagger m - I||_max <= tol.
inline bool validate_unitary(const ComplexMatrix& m, double tol = tol_valid)
{
    if (m.rows() != m.cols())
        throw dimension_error("unitary check needs a square matrix, got " +
                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    if (!all_finite(m))
        return false;
    const auto n = m.rows();
    return max_abs(m.adjoint() * m - ComplexMatrix::Identity(n, n)) <= tol;
}

/// Ordered complete family of orthogonal projectors; `labels` is either empty
/// or holds one outcome name per projector.
struct ProjectorFamily {
    std::vector<ComplexMatrix> projectors;
    std::vector<std::string> labels;

    std::size_t dimension() const
    {
        return projectors.empty() ? 0 : static_cast<std::size_t>(projectors.front().rows());
    }
    std::size_t size() const { return projectors.size(); }

    static ProjectorFamily identity(std::size_t n)
    {
        return ProjectorFamily{{ComplexMatrix::Identity(n, n)}, {}};
    }

    friend bool operator==(const ProjectorFamily& a, const ProjectorFamily& b)
    {
        if (a.labels != b.labels || a.projectors.size() != b.projectors.size())
            return false;
        for (std::size_t i = 0; i < a.projectors.size(); ++i)
            if (a.projectors[i].rows() != b.projectors[i].rows() ||
                a.projectors[i].cols() != b.projectors[i].cols() ||
                a.projectors[i] != b.projectors[i])
                return false;
        return true;
    }
};

/// Names every broken projector-family invariant. Throws dimension_error if
/// the members are not square matrices of one common size.
inline std::vector<std::string> projector_family_problems(const ProjectorFamily& f,
                                                          double tol = tol_valid)
{
    std::vector<std::string> problems;
    if (f.projectors.empty()) {
        problems.emplace_back("measurement has no projectors");
        return problems;
    }
    const auto n = f.projectors.front().rows();
    for (const auto& p : f.projectors)
        if (p.rows() != n || p.cols() != n)
            throw dimension_error("projector family members must all be " + std::to_string(n) +
                                  "x" + std::to_string(n));
    if (!f.labels.empty() && f.labels.size() != f.projectors.size())
        problems.emplace_back("label count differs from projector count");

    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < f.projectors.size(); ++i) {
        const auto& p = f.projectors[i];
        const std::string name = "projector " + std::to_string(i);
        if (!all_finite(p)) {
            problems.push_back(name + " has non-finite entries");
            continue;
        }
        if (!is_hermitian(p, tol))
            problems.push_back(name + " is not Hermitian");
        if (max_abs(p * p - p) > tol)
            problems.push_back(name + " is not idempotent");
        for (std::size_t j = i + 1; j < f.projectors.size(); ++j)
            if (max_abs(p * f.projectors[j]) > tol)
                problems.push_back("projectors " + std::to_string(i) + " and " +
                                   std::to_string(j) + " are not orthogonal");
        sum += p;
    }
    if (all_finite(sum) && max_abs(sum - ComplexMatrix::Identity(n, n)) > tol)
        problems.emplace_back("projectors do not sum to identity");
    return problems;
}

inline bool validate_projector_family(const ProjectorFamily& f, double tol = tol_valid)
{
    return projector_family_problems(f, tol).empty();
}

/// Hermitian, PSD (smallest eigenvalue >= -tol) and 0 <= trace <= 1 + tol.
inline bool is_density_like(const ComplexMatrix& rho, double tol = tol_valid)
{
    if (!is_hermitian(rho, tol))
        return false;
    const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().size() > 0 && eig.eigenvalues().minCoeff() < -tol)
        return false;
    const double tr = herm.trace().real();
    return tr >= -tol && tr <= 1.0 + tol;
}

/// Orthonormal basis of the real vector space of n x n Hermitian matrices
/// under <A, B> = trace(A^dagger B).
///
/// Ordering: I/sqrt(n); symmetric (E_jk + E_kj)/sqrt(2) for j < k in
/// lexicographic order; antisymmetric (-i E_jk + i E_kj)/sqrt(2) in the same
/// order; diagonal (E_00 + ... + E_{l-1,l-1} - l E_ll)/sqrt(l(l+1)) for
/// l = 1..n-1. For n = 2 this is {I, X, Y, Z}/sqrt(2).
class HermitianBasis {
public:
    explicit HermitianBasis(std::size_t n) : n_(n)
    {
        if (n == 0)
            throw domain_error("Hermitian basis needs dimension >= 1");
        const auto dim = static_cast<Eigen::Index>(n);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        elements_.reserve(n * n);
        elements_.push_back(ComplexMatrix::Identity(dim, dim) / std::sqrt(static_cast<double>(n)));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
                e(j, k) = e(k, j) = inv_sqrt2;
                elements_.push_back(std::move(e));
            }
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
                e(j, k) = complex(0.0, -inv_sqrt2);
                e(k, j) = complex(0.0, inv_sqrt2);
                elements_.push_back(std::move(e));
            }
        for (std::size_t l = 1; l < n; ++l) {
            const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
            ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
            for (std::size_t j = 0; j < l; ++j)
                e(j, j) = norm;
            e(l, l) = -static_cast<double>(l) * norm;
            elements_.push_back(std::move(e));
        }
    }

    std::size_t dimension() const noexcept { return n_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const ComplexMatrix& operator[](std::size_t i) const { return elements_[i]; }
    const std::vector<ComplexMatrix>& elements() const noexcept { return elements_; }

    /// Raw inner products <E_i, h>, without the Hermiticity check. For
    /// Hermitian h the imaginary parts vanish up to rounding.
    ComplexVector coordinates(const ComplexMatrix& h) const
    {
        check_shape(h);
        ComplexVector c(static_cast<Eigen::Index>(size()));
        for (std::size_t i = 0; i < size(); ++i)
            c(static_cast<Eigen::Index>(i)) = elements_[i].conjugate().cwiseProduct(h).sum();
        return c;
    }

    /// trace(E_i) for every element; only the first is non-zero (sqrt(n)).
    RealVector trace_covector() const
    {
        RealVector t(static_cast<Eigen::Index>(size()));
        for (std::size_t i = 0; i < size(); ++i)
            t(static_cast<Eigen::Index>(i)) = elements_[i].trace().real();
        return t;
    }

private:
    void check_shape(const ComplexMatrix& h) const
    {
        if (h.rows() != static_cast<Eigen::Index>(n_) || h.cols() != static_cast<Eigen::Index>(n_))
            throw dimension_error("matrix is " + std::to_string(h.rows()) + "x" +
                                  std::to_string(h.cols()) + ", basis dimension is " +
                                  std::to_string(n_));
    }

    std::size_t n_;
    std::vector<ComplexMatrix> elements_;
};

inline HermitianBasis hermitian_basis(std::size_t n) { return HermitianBasis(n); }

/// Real coordinates of a Hermitian matrix in `b`.
inline RealVector vectorize(const ComplexMatrix& h, const HermitianBasis& b)
{
    if (h.rows() != h.cols() || h.rows() != static_cast<Eigen::Index>(b.dimension()))
        throw dimension_error("vectorize: matrix does not match basis dimension " +
                              std::to_string(b.dimension()));
    if (!all_finite(h) || !is_hermitian(h, tol_valid))
        throw validation_error(std::vector<Violation>{{"", "vectorize: input matrix is not Hermitian"}});
    return b.coordinates(h).real();
}

/// Sum_i v_i E_i.
inline ComplexMatrix devectorize(const RealVector& v, const HermitianBasis& b)
{
    if (static_cast<std::size_t>(v.size()) != b.size())
        throw dimension_error("devectorize: vector has length " + std::to_string(v.size()) +
                              ", basis has " + std::to_string(b.size()) + " elements");
    const auto n = static_cast<Eigen::Index>(b.dimension());
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < b.size(); ++i)
        h += v(static_cast<Eigen::Index>(i)) * b[i];
    return h;
}

} // namespace qfa
