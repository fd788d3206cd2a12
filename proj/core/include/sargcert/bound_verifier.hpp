#pragma once

#include <utility>
#include <vector>

#include "sargcert/attack_forms.hpp"

namespace sargcert {

inline constexpr double kPsdTol = 1e-9;
inline constexpr double kIdentityTol = 1e-10;

/// Coefficients of a linear bound x p_bit + y p_fil >= p_ph.
struct BoundCoefficients {
    double x;
    double y;
};

struct FrontierPoint {
    double x;
    double y_star;       // smallest y certified by the PSD test
    double g;            // closed-form two-photon bound g(x)
    double margin_at_g;  // lambda_min(x H_bit + g(x) H_fil - H_ph)
    double gap;          // g(x) - y_star
};

/// lambda_min(x H_bit + y H_fil - H_ph). Non-negative certifies the per-pair
/// inequality for every attack.
double psd_margin(const FormSet& forms, BoundCoefficients c);
double psd_margin(double x, double y, Protocol protocol, int nu);

/// ||H_ph - 3/2 H_bit||_max at nu = 1.
double identity_check_single(const FormSet& forms);
double identity_check_single(Protocol protocol = Protocol::FourState);

/// (lambda_min(H_chi0- - 2 H_chi1+), lambda_min(2 H_chi1- - H_chi0-)) at nu = 1.
std::pair<double, double> correlation_psd_check(const FormSet& forms);
std::pair<double, double> correlation_psd_check();

/// g(x) = (3 - 2x + sqrt(6 - 6 sqrt2 x + 4x^2)) / 6.
double g_of_x(double x);
/// inf_x g(x) = sin^2(pi/8).
double g_infimum();

/// Bisection on y in [0, 1] for the smallest y with psd_margin >= -tol.
FrontierPoint frontier(const FormSet& forms, double x, double tol = kPsdTol);
FrontierPoint frontier(double x, Protocol protocol, int nu, double tol = kPsdTol);

/// 0..10 step 0.25, then 2.485, 2.747 and 1e3 (sorted ascending).
std::vector<double> default_x_grid();
std::vector<FrontierPoint> frontier_curve(const FormSet& forms, const std::vector<double>& xs,
                                          double tol = kPsdTol);

/// min over the grid of y_star(x): the phase-error bound at zero bit error.
/// A value >= 1/2 means no key can be certified from this photon number.
double zero_rate_check(const FormSet& forms, const std::vector<double>& xs = default_x_grid());
double zero_rate_check(Protocol protocol, int nu);

/// Smallest photon number at which unambiguous discrimination of the
/// protocol's signal ensemble becomes possible (four-state: 3, six-state: 5).
int discrimination_limit(Protocol protocol);

}  // namespace sargcert
