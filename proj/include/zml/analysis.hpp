#pragma once

#include <map>
#include <string>
#include <vector>

#include "zml/field.hpp"
#include "zml/initial_data.hpp"

namespace zml {

struct NormRecord {
    double t = 0.0;
    double l1 = 0.0;
    double lq = 0.0;
    double linf = 0.0;
    double mass = 0.0;
    std::map<double, double> lp_extra;
};

struct DecayFit {
    double exponent = 0.0;   // slope of log||.|| vs log t
    double prefactor = 0.0;  // exp(intercept)
    double window_lo = 0.0;
    double window_hi = 0.0;
    double residual = 0.0;   // RMS deviation in log space
};

struct ProfileDistance {
    double t = 0.0;
    double p = 1.0;
    double value = 0.0;  // t^{(n/2)(1-1/p)+beta/2} ||u - A D^beta G(.,t)||_p
};

NormRecord record_norms(const RealField& u, double t, double q,
                        const std::vector<double>& p_list = {});

// norm_key: "l1", "lq", "linf", or "p:<value>" for an lp_extra entry
DecayFit fit_decay(const std::vector<NormRecord>& records, const std::string& norm_key,
                   double t_lo, double t_hi);

ProfileDistance profile_distance(const RealField& u, double t, double A, double beta, double p);

// Relative L1 distance between lambda^{n+beta} u_t2(lambda x) and u_t1(x),
// lambda = sqrt(t2/t1) required integer (grid-aligned resampling).
double scaling_collapse(const RealField& u_t1, const RealField& u_t2, double t1, double t2,
                        double beta);

// Running suprema sup_{tau<=t} tau^{beta/2} ||u||_1
//              + sup_{tau<=t} tau^{(1/2+beta/2)/q*} ||u||_{q*}
std::vector<std::pair<double, double>> g_functional(const std::vector<NormRecord>& records,
                                                    double beta, double q_star);

// ||u||_q^q / (||u||_{q*}^{q*} ||u||_inf^{q-q*}); Hoelder gives <= 1
double holder_interpolation_check(const RealField& u, double q, double q_star);

// ||u - e^{t_flow Delta} u0||_p
double linearization_distance(const RealField& u, const InitialDatum& u0, double t_flow,
                              double p);

}  // namespace zml
