#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace klab {

using cplx = std::complex<double>;
using Vec3 = std::array<cplx, 3>;

enum class ErrorKind {
    ZeroVector,
    CoincidentPoints,
    CoincidentLines,
    SingularMatrix,
    IdentityElement,
    EllipticUnsupported,
    IllConditioned,
    ZeroMatrix,
    InKernel,
    CapExceeded,
    BadParameters,
    InputError,
    IoError,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::CoincidentPoints: return "CoincidentPoints";
        case ErrorKind::CoincidentLines: return "CoincidentLines";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::IdentityElement: return "IdentityElement";
        case ErrorKind::EllipticUnsupported: return "EllipticUnsupported";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::ZeroMatrix: return "ZeroMatrix";
        case ErrorKind::InKernel: return "InKernel";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::BadParameters: return "BadParameters";
        case ErrorKind::InputError: return "InputError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Default tolerances shared by the modules.
namespace tol {
inline constexpr double distinct = 1e-9;
inline constexpr double incidence = 1e-9;
inline constexpr double modulus = 1e-7;
inline constexpr double rank = 1e-8;
inline constexpr double borderline_lo = 1e-10;
inline constexpr double borderline_hi = 1e-6;
inline constexpr double condition = 1e12;
inline constexpr double order = 1e-8;
inline constexpr double cluster = 1e-6;
inline constexpr double concurrency = 1e-8;
inline constexpr double dedup_grid = 1e-7;
inline constexpr double guard_lo = 1e-10;  // concurrency guard band
inline constexpr double guard_hi = 1e-6;
}  // namespace tol

inline double norm2(const Vec3& v) { return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

// Bilinear (unconjugated) pairing: the incidence relation of CP^2.
inline cplx bdot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
// Hermitian inner product <a,b> = sum conj(a_i) b_i.
inline cplx hdot(const Vec3& a, const Vec3& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2];
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Vec3 scale(const Vec3& v, cplx s) { return {v[0] * s, v[1] * s, v[2] * s}; }
inline Vec3 conj(const Vec3& v) { return {std::conj(v[0]), std::conj(v[1]), std::conj(v[2])}; }
inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

inline cplx det3(const Vec3& a, const Vec3& b, const Vec3& c) { return bdot(a, cross(b, c)); }

struct Mat3 {
    std::array<cplx, 9> a{};

    cplx& operator()(int i, int j) { return a[3 * i + j]; }
    const cplx& operator()(int i, int j) const { return a[3 * i + j]; }

    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
    static Mat3 diag(cplx x, cplx y, cplx z) {
        Mat3 m;
        m(0, 0) = x;
        m(1, 1) = y;
        m(2, 2) = z;
        return m;
    }
    static Mat3 rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
        Mat3 m;
        for (int j = 0; j < 3; ++j) {
            m(0, j) = r0[j];
            m(1, j) = r1[j];
            m(2, j) = r2[j];
        }
        return m;
    }

    Vec3 row(int i) const { return {a[3 * i], a[3 * i + 1], a[3 * i + 2]}; }
    Vec3 col(int j) const { return {a[j], a[3 + j], a[6 + j]}; }
};

inline Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j) + x(i, 2) * y(2, j);
    return r;
}

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {bdot(m.row(0), v), bdot(m.row(1), v), bdot(m.row(2), v)};
}

inline Mat3 operator*(const Mat3& m, cplx s) {
    Mat3 r = m;
    for (auto& x : r.a) x *= s;
    return r;
}

inline Mat3 operator+(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int k = 0; k < 9; ++k) r.a[k] = x.a[k] + y.a[k];
    return r;
}

inline Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int k = 0; k < 9; ++k) r.a[k] = x.a[k] - y.a[k];
    return r;
}

inline Mat3 transpose(const Mat3& m) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = m(j, i);
    return r;
}

inline Mat3 adjoint(const Mat3& m) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = std::conj(m(j, i));
    return r;
}

inline cplx det(const Mat3& m) { return det3(m.row(0), m.row(1), m.row(2)); }

// Classical adjugate: adj(m) * m = det(m) * I.
inline Mat3 adjugate(const Mat3& m) {
    Vec3 c0 = cross(m.row(1), m.row(2));
    Vec3 c1 = cross(m.row(2), m.row(0));
    Vec3 c2 = cross(m.row(0), m.row(1));
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        r(i, 0) = c0[i];
        r(i, 1) = c1[i];
        r(i, 2) = c2[i];
    }
    return r;
}

inline double frob2(const Mat3& m) {
    double s = 0;
    for (const auto& x : m.a) s += std::norm(x);
    return s;
}
inline double frob(const Mat3& m) { return std::sqrt(frob2(m)); }

inline double max_abs(const Mat3& m) {
    double s = 0;
    for (const auto& x : m.a) s = std::max(s, std::abs(x));
    return s;
}

// Index of the first entry whose modulus is within a relative 1e-9 of the max.
// The tolerance keeps canonical phases stable under rounding noise on exact ties.
template <std::size_t N>
inline std::size_t dominant_index(const std::array<cplx, N>& v) {
    double m = 0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    for (std::size_t i = 0; i < N; ++i)
        if (std::abs(v[i]) >= m * (1.0 - 1e-9)) return i;
    return 0;
}

// Chordal Fubini-Study distance between unit vectors: 2 asin(|a - e^{i phi} b| / 2)
// with the phase aligned.  Accurate for tiny angles, unlike arccos.
template <std::size_t N>
inline double fs_distance_unit(const std::array<cplx, N>& a, const std::array<cplx, N>& b) {
    cplx ip = 0;
    for (std::size_t i = 0; i < N; ++i) ip += std::conj(b[i]) * a[i];
    double m = std::abs(ip);
    cplx ph = m > 0 ? ip / m : cplx(1.0);
    double d2 = 0;
    for (std::size_t i = 0; i < N; ++i) d2 += std::norm(a[i] - ph * b[i]);
    double c = std::sqrt(d2) / 2.0;
    return 2.0 * std::asin(std::min(1.0, c));
}

}  // namespace klab
