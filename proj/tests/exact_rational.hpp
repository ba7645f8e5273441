#pragma once

// Minimal exact rational over long long, just enough for the scalar-generic
// transform kernels: +, -, unary -, and the orderings.  Inputs in the tests
// stay tiny (numerators below a few hundred, denominators below twenty), so
// overflow is not a concern after gcd reduction.

#include <cstdint>
#include <numeric>

struct Rat {
  long long num = 0;
  long long den = 1;

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(long long n, long long d) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return Rat(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return Rat(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  Rat operator-() const { return Rat(-num, den); }

  friend bool operator<(const Rat& a, const Rat& b) {
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator<=(const Rat& a, const Rat& b) {
    return a.num * b.den <= b.num * a.den;
  }
  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num == b.num && a.den == b.den;
  }
};
