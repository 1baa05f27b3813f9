#pragma once

#include <cmath>

namespace ks {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm2(const Vec2& a) { return dot(a, a); }
inline double norm(const Vec2& a) { return std::sqrt(norm2(a)); }

// cross product z-component of the embedded 3d vectors
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

// 2x2 matrix, row-major: m(i,j) = row i, column j
struct Mat2 {
    double m00 = 0.0, m01 = 0.0, m10 = 0.0, m11 = 0.0;

    Vec2 apply(const Vec2& v) const { return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y}; }
    Vec2 apply_t(const Vec2& v) const { return {m00 * v.x + m10 * v.y, m01 * v.x + m11 * v.y}; }
    Vec2 col(int j) const { return j == 0 ? Vec2{m00, m10} : Vec2{m01, m11}; }
    Vec2 row(int i) const { return i == 0 ? Vec2{m00, m01} : Vec2{m10, m11}; }

    Mat2& operator+=(const Mat2& o) {
        m00 += o.m00; m01 += o.m01; m10 += o.m10; m11 += o.m11;
        return *this;
    }
    Mat2& operator*=(double s) {
        m00 *= s; m01 *= s; m10 *= s; m11 *= s;
        return *this;
    }
};

inline Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
inline Mat2 operator*(double s, Mat2 a) { return a *= s; }

inline Mat2 outer(const Vec2& a, const Vec2& b) {
    return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}

inline Mat2 identity2() { return {1.0, 0.0, 0.0, 1.0}; }

// squared Frobenius norm
inline double frob2(const Mat2& a) {
    return a.m00 * a.m00 + a.m01 * a.m01 + a.m10 * a.m10 + a.m11 * a.m11;
}

struct Disk {
    Vec2 center;
    double radius = 1.0;

    bool contains(const Vec2& p) const { return norm2(p - center) <= radius * radius; }
};

} // namespace ks
