#include "dhym/hermitian.hpp"

#include "dhym/errors.hpp"
#include "dhym/tolerances.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace dhym {

HermitianForm::HermitianForm(ComplexMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
        throw InputError("HermitianForm: expected a non-empty square matrix");
    }
    if (!entries_.allFinite()) {
        throw InputError("HermitianForm: non-finite entry");
    }
    const double scale = entries_.cwiseAbs().maxCoeff();
    const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermTol * scale) {
        std::ostringstream msg;
        msg << "HermitianForm: matrix is not Hermitian (max |A - A^*| = " << asym
            << ", scale " << scale << ")";
        throw InputError(msg.str());
    }
    entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
}

HermitianForm::HermitianForm(const RealMatrix& entries)
    : HermitianForm(ComplexMatrix(entries.cast<Complex>())) {}

HermitianForm HermitianForm::identity(int n) {
    return HermitianForm(ComplexMatrix(ComplexMatrix::Identity(n, n)));
}

HermitianForm HermitianForm::zero(int n) {
    return HermitianForm(ComplexMatrix(ComplexMatrix::Zero(n, n)));
}

HermitianForm HermitianForm::diagonal(std::span<const double> values) {
    RealMatrix d = RealMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                                    static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = values[i];
    }
    return HermitianForm(d);
}

HermitianForm HermitianForm::diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
}

bool HermitianForm::is_real() const {
    return entries_.imag().cwiseAbs().maxCoeff() == 0.0;
}

double HermitianForm::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(entries_, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

bool HermitianForm::is_positive_definite() const {
    Eigen::LLT<ComplexMatrix> llt(entries_);
    return llt.info() == Eigen::Success && min_eigenvalue() > 0.0;
}

void HermitianForm::require_positive_definite(const char* what) const {
    const double smallest = min_eigenvalue();
    if (!(smallest > 0.0)) {
        std::ostringstream msg;
        msg << what << ": background form is not positive definite (smallest eigenvalue "
            << smallest << ")";
        throw InputError(msg.str());
    }
}

HermitianForm operator+(const HermitianForm& a, const HermitianForm& b) {
    if (a.dim() != b.dim()) throw InputError("HermitianForm: dimension mismatch");
    return HermitianForm(ComplexMatrix(a.matrix() + b.matrix()));
}

HermitianForm operator*(double s, const HermitianForm& a) {
    return HermitianForm(ComplexMatrix(s * a.matrix()));
}

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end(), std::greater<>());
}

Spectrum::Spectrum(std::initializer_list<double> values)
    : Spectrum(std::vector<double>(values)) {}

Spectrum Spectrum::shifted(double t) const {
    std::vector<double> out(values_);
    for (double& v : out) v -= t;
    return Spectrum(std::move(out));
}

Spectrum Spectrum::negated() const {
    std::vector<double> out(values_);
    for (double& v : out) v = -v;
    return Spectrum(std::move(out));
}

bool ConeLevel::is_supercritical() const {
    return sigma > supercritical_floor(n) && sigma < phase_ceiling(n);
}

}  // namespace dhym
