#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orthozeros/geometry.hpp"
#include "orthozeros/orthopoly.hpp"
#include "orthozeros/surface.hpp"

namespace oz {

// Basis and periods of one interval system, computed once.
struct Surface {
    IntervalSystem sys;
    FirstKindBasis basis;
    PeriodData periods;

    explicit Surface(IntervalSystem s);
    int genus() const { return basis.genus(); }
};

struct WeightTransform {
    Eigen::VectorXd phi;
    bool identity_checked = false;  // all rho roots real
    double identity_residual = 0.0;
};

// phi_k = int_E d_k log|W| / h.
WeightTransform weight_transform(const Surface& s, const WeightSpec& spec);

struct PredictionVector {
    int n = 0;
    Eigen::VectorXd V;
    std::vector<int> counts;   // bands 1..l; the last one needs the gap forecast
    bool interior = true;
    Eigen::VectorXd cell;      // fractional part of 2 V
};

// #Z(R, E_j), j = 1..l-1.
Eigen::VectorXd endpoint_root_counts(const WeightSpec& spec);

PredictionVector compute_V(const Surface& s, const WeightSpec& spec, const WeightTransform& phi, int n,
                           double epsilon = 0.02);

struct GapForecast {
    int n = 0;
    std::vector<double> x;
    std::vector<int> delta;
    std::vector<int> occupancy;
    double residual = 0.0;
};

GapForecast forecast_gaps(const Surface& s, const PredictionVector& pv);

// Prediction with the last band filled in from the gap forecast.
struct Prediction {
    PredictionVector vec;
    GapForecast gaps;
};

Prediction predict(const Surface& s, const WeightSpec& spec, const WeightTransform& phi, int n,
                   double epsilon = 0.02);

struct CongruenceReport {
    int n = 0;
    double defect = 0.0;          // max |lambda| after lattice reduction, cell units
    Eigen::VectorXd lambda;
    int control_gap = 0;          // gap whose sheet was flipped in the control
    double control_defect = 0.0;
};

CongruenceReport verify_congruence(const Surface& s, const WeightSpec& spec, const WeightTransform& phi,
                             const PellData& pell, const std::vector<int>& band_counts);

// Zeros of P_n(R / (W h)) for n up to n_max from one discretization.
class ZeroOracle {
public:
    ZeroOracle(const WeightSpec& spec, int n_max, int nodes_per_band = 0);
    ZeroReport zeros(int n) const;
    // min over zeros of S on E of |P_n| divided by max |P_n| on E; 1 when S has no zeros.
    double s_zero_ratio(int n) const;
    const Recurrence& recurrence() const { return rec_; }
    int n_max() const { return n_max_; }

private:
    const WeightSpec& spec_;
    int n_max_;
    DiscretizedMeasure mu_;
    Recurrence rec_;
};

struct CompareRow {
    int n = 0;
    int j = 0;
    int actual = 0;
    int predicted = 0;
    int defect = 0;
    int occupancy_actual = -1;     // -1 for the last band
    int occupancy_predicted = -1;
    bool interior = false;
    bool threshold_ok = true;
};

struct CompareSummary {
    int n_count = 0;
    int max_defect = 0;
    int max_defect_thresholded = 0;
    double count_match_rate = 0.0;
    double occupancy_match_rate = 0.0;
    int flagged = 0;
    double flagged_count_match_rate = 1.0;
    double flagged_occupancy_match_rate = 1.0;
};

struct Comparison {
    std::vector<CompareRow> rows;
    CompareSummary summary;
};

Comparison compare(const Surface& s, const WeightSpec& spec, int n_min, int n_max, double epsilon = 0.02,
                   double threshold = 1e-3);

std::string comparison_csv(const Comparison& c);

struct PeriodicityReport {
    bool counts_ok = true;
    bool forecast_invariant = true;
    double max_forecast_shift = 0.0;
    std::vector<std::string> failures;
};

// Checks #Z(P_{n+N}, E_j) = #Z(P_n, E_j) + k_j on [n_min, n_max] and invariance of the forecast.
PeriodicityReport rational_periodicity(const Surface& s, const WeightSpec& spec, int N, const std::vector<int>& k,
                                       int n_min, int n_max);

struct GapHistogram {
    int gap = 0;
    std::vector<double> visited;         // forecast x with delta = -1, sorted
    std::vector<double> actual;          // actual gap zeros, sorted
    double largest_unvisited = 0.0;
    int distinct_points = 0;
    std::vector<double> bin_edges;
    std::vector<int> bin_counts;
    std::vector<double> target_distance;
};

struct AccumulationReport {
    int n_max = 0;
    std::vector<GapHistogram> gaps;
};

AccumulationReport accumulation_experiment(const Surface& s, const WeightSpec& spec, int n_max,
                                           const std::vector<std::vector<double>>& targets = {},
                                           int bins = 50, int n_min = 1);

}  // namespace oz
