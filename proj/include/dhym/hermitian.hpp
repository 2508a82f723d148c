#pragma once

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace dhym {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Pointwise value of a real (1,1) form: an n x n Hermitian coefficient matrix.
/// Construction validates Hermitian symmetry to a relative tolerance and
/// symmetrizes the stored entries.
class HermitianForm {
public:
    HermitianForm() = default;
    explicit HermitianForm(ComplexMatrix entries);
    explicit HermitianForm(const RealMatrix& entries);

    static HermitianForm identity(int n);
    static HermitianForm zero(int n);
    static HermitianForm diagonal(std::span<const double> values);
    static HermitianForm diagonal(std::initializer_list<double> values);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const ComplexMatrix& matrix() const { return entries_; }
    bool is_real() const;

    /// Smallest eigenvalue of the form itself.
    double min_eigenvalue() const;
    bool is_positive_definite() const;

    /// Throws InputError naming the smallest eigenvalue when not positive definite.
    void require_positive_definite(const char* what) const;

private:
    ComplexMatrix entries_;
};

HermitianForm operator+(const HermitianForm& a, const HermitianForm& b);
HermitianForm operator*(double s, const HermitianForm& a);

/// Real eigenvalues sorted descending.
class Spectrum {
public:
    Spectrum() = default;
    /// Sorts the input descending.
    explicit Spectrum(std::vector<double> values);
    Spectrum(std::initializer_list<double> values);

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }
    std::span<const double> span() const { return values_; }

    double largest() const { return values_.front(); }
    double smallest() const { return values_.back(); }

    /// Spectrum of lambda - t * Id.
    Spectrum shifted(double t) const;
    /// Spectrum of -lambda.
    Spectrum negated() const;

private:
    std::vector<double> values_;
};

/// A phase level sigma in dimension n, defining Gamma^sigma = {Theta > sigma}.
struct ConeLevel {
    int n = 0;
    double sigma = 0.0;

    bool is_supercritical() const;
};

}  // namespace dhym
