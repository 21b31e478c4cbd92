#include <cmath>
#include <functional>
#include <stdexcept>

#include "quadcorr/constants.hpp"

namespace qc {

namespace {

// adaptive Simpson with absolute tolerance
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

constexpr double kPi = 3.14159265358979323846264338327950288;

double ball_vol(int k) { return std::pow(kPi, k / 2.0) / std::tgamma(k / 2.0 + 1.0); }

double smooth_bump(double u) {
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    double t = u * u;
    return std::exp(-t / (1.0 - t));
}

}  // namespace

double sigma_inf(double X, double l) {
    if (X <= 0) throw std::domain_error("sigma_inf: X > 0 required");
    if (l < 0) throw std::domain_error("sigma_inf: l >= 0 required");
    if (l == 0) return 2.0 * kPi * kPi;
    double bracket = (2.0 * X + l) * std::sqrt(X * (X + l)) - l * l * std::asinh(std::sqrt(X / l));
    return kPi * kPi * bracket / (std::pow(X, 1.5) * std::sqrt(X + l));
}

double sigma_inf_quad(double X, double l) {
    if (X <= 0) throw std::domain_error("sigma_inf_quad: X > 0 required");
    double scale = std::sqrt(X + l);
    double I = integrate([&](double r) { return r * r * std::sqrt(r * r * X + l); }, 0.0, 1.0,
                         1e-13 * scale);
    return 8.0 * kPi * kPi * I / scale;
}

double gamma_inf_nonsplit(double X, double d) {
    if (X <= 0) throw std::domain_error("gamma_inf_nonsplit: X > 0 required");
    if (d < 0) throw std::domain_error("gamma_inf_nonsplit: d >= 0 required");
    if (d == 0) return kPi;
    return kPi * (1.0 + d * std::asinh(X / std::sqrt(d)) / (X * std::sqrt(X * X + d)));
}

double gamma_inf_nonsplit_quad(double X, double d) {
    if (X <= 0) throw std::domain_error("gamma_inf_nonsplit_quad: X > 0 required");
    double X2 = X * X;
    // V(kappa)/(2 kappa) with the x2 integral taken over [0,1] (one-sided) and
    // the x1 ball slab integrated in closed form.
    auto slab = [&](double kappa) {
        auto f = [&](double x2) {
            double c = (X2 * x2 * x2 + d) / (X2 + d);
            double hi = std::min(1.0, c + kappa), lo = std::max(0.0, c - kappa);
            if (hi <= lo) return 0.0;
            double vol = ball_vol(3) * (std::pow(hi, 1.5) - std::pow(lo, 1.5));
            return vol / (2.0 * kappa);
        };
        return integrate(f, 0.0, 1.0, 1e-11);
    };
    // Neville extrapolation to kappa -> 0. The clip at c = 1 makes the error
    // first order in kappa with scale kappa * (X^2+d)/X^2, so the base level
    // shrinks with that ratio.
    double k0 = 4e-4 * X2 / (X2 + d);
    double f0 = slab(k0), f1 = slab(k0 / 2), f2 = slab(k0 / 4);
    double e01 = 2.0 * f1 - f0;
    double e12 = 2.0 * f2 - f1;
    double e = (4.0 * e12 - e01) / 3.0;
    if (std::fabs(e12 - e01) > 1e-4 * (1.0 + std::fabs(e)))
        throw std::runtime_error("gamma_inf_nonsplit_quad: extrapolation did not converge");
    return e;
}

WindowSpec WindowSpec::sharp(int k1, int k2, double det1, double det2) {
    WindowSpec w;
    w.k1 = k1;
    w.k2 = k2;
    w.det1 = det1;
    w.det2 = det2;
    return w;
}

double c_inf_window(const WindowSpec& w, double X, double l) {
    if (X <= 0) throw std::domain_error("c_inf_window: X > 0 required");
    double Y = X + l;
    double rho1 = w.k1 / 2.0 * ball_vol(w.k1) / std::sqrt(w.det1);
    double rho2 = w.k2 / 2.0 * ball_vol(w.k2) / std::sqrt(w.det2);

    // inner u-integral of rho1(u) w1(u) over [c-kappa, c+kappa] ∩ [0,1]
    auto inner = [&](double c, double kappa) {
        double lo = std::max(0.0, c - kappa), hi = std::min(1.0, c + kappa);
        if (hi <= lo) return 0.0;
        if (w.w1 == WindowSpec::Factor::Sharp) {
            // integral of (k1/2) u^{k1/2-1} is u^{k1/2}
            return ball_vol(w.k1) / std::sqrt(w.det1) *
                   (std::pow(hi, w.k1 / 2.0) - std::pow(lo, w.k1 / 2.0));
        }
        return integrate([&](double u) { return rho1 * std::pow(u, w.k1 / 2.0 - 1.0) * smooth_bump(u); },
                         lo, hi, 1e-12 * (hi - lo + 1e-30));
    };

    auto windowed2 = [&](double v) {
        double base = rho2 * std::pow(v, w.k2 / 2.0 - 1.0);
        return (w.w2 == WindowSpec::Factor::Sharp) ? base : base * smooth_bump(v);
    };

    auto slab = [&](double kappa) {
        // substitute v = t^2 when k2 == 1 to remove the v^{-1/2} endpoint
        if (w.k2 == 1) {
            auto f = [&](double t) {
                double v = t * t;
                double c = (X * v + l) / Y;
                // rho2(v) dv = 2 * rho2(t^2) t dt, rho2(v) = (1/2) w2 v^{-1/2} * 2/sqrt(det2)
                double dens = 2.0 * windowed2(v) * t;
                return dens * inner(c, kappa) / (2.0 * kappa);
            };
            return integrate(f, 1e-12, 1.0, 1e-11);
        }
        auto f = [&](double v) {
            double c = (X * v + l) / Y;
            return windowed2(v) * inner(c, kappa) / (2.0 * kappa);
        };
        return integrate(f, 0.0, 1.0, 1e-11);
    };

    double k0 = 4e-4 * X / Y;
    double f0 = slab(k0), f1 = slab(k0 / 2), f2 = slab(k0 / 4);
    double e01 = 2.0 * f1 - f0;
    double e12 = 2.0 * f2 - f1;
    double e = (4.0 * e12 - e01) / 3.0;
    if (std::fabs(e12 - e01) > 2e-4 * (1.0 + std::fabs(e)))
        throw std::runtime_error("c_inf_window: extrapolation did not converge");
    return e;
}

}  // namespace qc
