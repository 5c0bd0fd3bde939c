#pragma once

// Globally adaptive 21-point Gauss-Kronrod quadrature (QUADPACK qk21 rule and
// qage-style bisection of the worst panel) for scalar, complex and Eigen-vector
// valued integrands.

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace recoil::quad {

namespace detail {

// Kronrod abscissae (descending, last = centre) and weights; Gauss weights for the
// embedded 10-point rule sit on the odd Kronrod indices.
inline constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

}  // namespace detail

/// Magnitude used for error control; max-norm for vector-valued integrands.
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

template <class T>
T zero_like(const T& sample) {
    if constexpr (std::is_arithmetic_v<T>) {
        return T{0};
    } else if constexpr (std::is_same_v<T, std::complex<double>>) {
        return T{0.0, 0.0};
    } else {
        return T::Zero(sample.rows(), sample.cols());
    }
}

struct Options {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    std::size_t max_panels = 2000;
};

template <class T>
struct Result {
    T value;
    double error = 0.0;
    bool converged = false;
    std::size_t evaluations = 0;
};

template <class T>
struct Panel {
    double a = 0.0;
    double b = 0.0;
    T value;
    double error = 0.0;
};

/// One application of the 21-point rule on [a, b].
template <class F>
auto gauss_kronrod21(F& f, double a, double b) {
    using T = std::decay_t<decltype(f(a))>;
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<T, 21> fv;
    fv[10] = f(centre);
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * detail::xgk[j];
        fv[j] = f(centre - dx);
        fv[20 - j] = f(centre + dx);
    }

    T kron = fv[10] * detail::wgk[10];
    T gauss = zero_like(fv[10]);
    double resabs = detail::wgk[10] * magnitude(fv[10]);
    for (std::size_t j = 0; j < 10; ++j) {
        const T pair = fv[j] + fv[20 - j];
        kron += pair * detail::wgk[j];
        resabs += detail::wgk[j] * (magnitude(fv[j]) + magnitude(fv[20 - j]));
        if (j % 2 == 1) gauss += pair * detail::wg[j / 2];
    }
    const T mean = kron * 0.5;
    double resasc = detail::wgk[10] * magnitude(fv[10] - mean);
    for (std::size_t j = 0; j < 10; ++j) {
        resasc += detail::wgk[j] * (magnitude(fv[j] - mean) + magnitude(fv[20 - j] - mean));
    }

    const double hl = std::abs(half);
    double err = magnitude(T((kron - gauss) * half));
    resabs *= hl;
    resasc *= hl;
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);

    return Panel<T>{a, b, T(kron * half), err};
}

/// Adaptive integral over [breaks.front(), breaks.back()] with the interior
/// breakpoints used as initial panel boundaries.
template <class F>
auto integrate(F&& f, std::span<const double> breaks, const Options& opt = {}) {
    using T = std::decay_t<decltype(f(breaks[0]))>;
    using P = Panel<T>;
    auto worse = [](const P& x, const P& y) { return x.error < y.error; };
    std::priority_queue<P, std::vector<P>, decltype(worse)> heap(worse);

    Result<T> out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] == breaks[i]) continue;
        heap.push(gauss_kronrod21(f, breaks[i], breaks[i + 1]));
        out.evaluations += 21;
    }
    if (heap.empty()) {
        out.value = zero_like(f(breaks[0]));
        out.converged = true;
        return out;
    }

    auto totals = [&heap]() {
        // priority_queue has no iteration; copy is cheap relative to integrand cost
        auto copy = heap;
        std::vector<P> panels;
        panels.reserve(copy.size());
        while (!copy.empty()) {
            panels.push_back(copy.top());
            copy.pop();
        }
        std::sort(panels.begin(), panels.end(), [](const P& x, const P& y) { return x.a < y.a; });
        T sum = panels.front().value;
        double err = panels.front().error;
        for (std::size_t i = 1; i < panels.size(); ++i) {
            sum += panels[i].value;
            err += panels[i].error;
        }
        return std::pair<T, double>{sum, err};
    };

    // Running totals drive the loop; the final answer is re-summed in panel order.
    auto [value, error] = totals();
    while (true) {
        const double target = std::max(opt.abs_tol, opt.rel_tol * magnitude(value));
        if (error <= target) {
            out.converged = true;
            break;
        }
        if (heap.size() >= opt.max_panels) break;
        P worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break;  // interval exhausted at double precision
        heap.pop();
        P left = gauss_kronrod21(f, worst.a, mid);
        P right = gauss_kronrod21(f, mid, worst.b);
        out.evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(std::move(left));
        heap.push(std::move(right));
    }
    std::tie(out.value, out.error) = totals();
    if (!out.converged) {
        out.converged = out.error <= std::max(opt.abs_tol, opt.rel_tol * magnitude(out.value));
    }
    return out;
}

template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {}) {
    const std::array<double, 2> ends{a, b};
    return integrate(std::forward<F>(f), std::span<const double>(ends), opt);
}

}  // namespace recoil::quad
