#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "postsel/common.hpp"
#include "postsel/errors.hpp"
#include "postsel/space.hpp"

namespace postsel {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

enum class Normalize { No, Yes };

namespace detail {

inline void require_finite(const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
            fail(Errc::DegenerateState, "non-finite amplitude");
}

inline void require_finite(const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                fail(Errc::DegenerateState, "non-finite operator entry");
}

}  // namespace detail

/// A pure state: one complex amplitude per basis mode of its space.
class Ket {
public:
    Ket(Space space, Vector amps, Normalize normalize = Normalize::No)
        : space_(std::move(space)), amps_(std::move(amps)) {
        if (amps_.size() != space_.dim())
            fail(Errc::SpaceMismatch, "amplitude count does not match space dimension");
        detail::require_finite(amps_);
        if (normalize == Normalize::Yes) {
            double n = amps_.norm();
            if (n <= 0.0)
                fail(Errc::DegenerateState, "cannot normalize the zero vector");
            amps_ /= n;
        }
    }

    const Space& space() const { return space_; }
    const Vector& amps() const { return amps_; }
    Cx amp(int i) const { return amps_[i]; }
    int dim() const { return static_cast<int>(amps_.size()); }

    double norm2() const { return amps_.squaredNorm(); }
    bool is_normalized(double tol = kExactTol) const { return std::abs(norm2() - 1.0) <= tol; }

    Ket normalized() const { return Ket(space_, amps_, Normalize::Yes); }

private:
    Space space_;
    Vector amps_;
};

/// A dense square operator over a declared space.
class Operator {
public:
    Operator(Space space, Matrix m) : space_(std::move(space)), matrix_(std::move(m)) {
        if (matrix_.rows() != matrix_.cols() || matrix_.rows() != space_.dim())
            fail(Errc::SpaceMismatch, "matrix shape does not match space dimension");
        detail::require_finite(matrix_);
    }

    static Operator identity(const Space& s) {
        return Operator(s, Matrix::Identity(s.dim(), s.dim()));
    }

    const Space& space() const { return space_; }
    const Matrix& matrix() const { return matrix_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }

    bool is_hermitian(double tol = kExactTol) const {
        return (matrix_ - matrix_.adjoint()).norm() <= tol;
    }
    bool is_projector(double tol = kExactTol) const {
        return is_hermitian(tol) && (matrix_ * matrix_ - matrix_).norm() <= tol;
    }
    bool is_unitary(double tol = kExactTol) const {
        return (matrix_.adjoint() * matrix_ - Matrix::Identity(dim(), dim())).norm() <= tol;
    }

private:
    Space space_;
    Matrix matrix_;
};

inline Ket make_ket(const Space& space, const std::vector<Cx>& amps,
                    Normalize normalize = Normalize::No) {
    Vector v(amps.size());
    for (size_t i = 0; i < amps.size(); ++i) v[static_cast<Eigen::Index>(i)] = amps[i];
    return Ket(space, std::move(v), normalize);
}

/// Single-factor convenience: one labeled mode per amplitude.
inline Ket make_ket(const std::vector<std::string>& labels, const std::vector<Cx>& amps,
                    Normalize normalize = Normalize::No) {
    if (labels.size() != amps.size())
        fail(Errc::SpaceMismatch, "label and amplitude counts differ");
    return make_ket(Space::single(labels), amps, normalize);
}

inline Ket basis_ket(const Space& space, int flat) {
    Vector v = Vector::Zero(space.dim());
    if (flat < 0 || flat >= space.dim())
        fail(Errc::SpaceMismatch, "basis index out of range");
    v[flat] = 1.0;
    return Ket(space, std::move(v));
}

inline Ket basis_ket(const Space& space, const std::string& label) {
    return basis_ket(space, space.index_of_label(label));
}

/// <bra|ket>, conjugate-linear in the first argument.
inline Cx inner(const Ket& bra, const Ket& ket) {
    if (bra.space() != ket.space())
        fail(Errc::SpaceMismatch, "inner product across different spaces");
    return bra.amps().dot(ket.amps());
}

inline Ket tensor(const Ket& a, const Ket& b) {
    Space s = a.space().tensor_with(b.space());
    Vector v(a.dim() * b.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j)
            v[i * b.dim() + j] = a.amp(i) * b.amp(j);
    return Ket(std::move(s), std::move(v));
}

inline Operator tensor(const Operator& a, const Operator& b) {
    Space s = a.space().tensor_with(b.space());
    int da = a.dim(), db = b.dim();
    Matrix m(da * db, da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    return Operator(std::move(s), std::move(m));
}

/// Matrix-vector product; the output is allowed to be unnormalized.
inline Ket apply(const Operator& op, const Ket& ket) {
    if (op.space() != ket.space())
        fail(Errc::SpaceMismatch, "operator and ket live on different spaces");
    return Ket(ket.space(), op.matrix() * ket.amps());
}

/// Rank-1 projector |v><v| of a normalized ket.
inline Operator projector_of(const Ket& ket) {
    if (!ket.is_normalized())
        fail(Errc::DegenerateState, "projector requires a normalized ket");
    return Operator(ket.space(), ket.amps() * ket.amps().adjoint());
}

inline Operator basis_projector(const Space& space, int flat) {
    return projector_of(basis_ket(space, flat));
}

/// Real rotation on a 2-dimensional space:
///   [[ cos(phi), sin(phi)],
///    [-sin(phi), cos(phi)]].
inline Operator rotation(const Space& space, double phi) {
    if (space.dim() != 2)
        fail(Errc::SpaceMismatch, "rotation is defined on 2-dimensional spaces");
    Matrix m(2, 2);
    m << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
    return Operator(space, std::move(m));
}

}  // namespace postsel
