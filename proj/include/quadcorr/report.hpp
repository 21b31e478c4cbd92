#pragma once

// Experiment orchestration: grid specs, predicted-vs-empirical report rows,
// deterministic CSV output, and error-exponent fitting.

#include <iostream>
#include <map>
#include <string>

#include "quadcorr/expsum.hpp"

namespace qc {

struct ExperimentSpec {
    enum class Kind { Split, Nonsplit, TwoSquares, GeneralRQ };

    Kind kind = Kind::Split;
    std::vector<i64> Xs;      // ascending, nonempty
    std::vector<i64> shifts;  // l (or d) grid, ascending, nonempty
    i64 pmax = 50;
    i64 Z = 200;
    std::string cache_dir;
    std::string out_path = "-";
    int threads = 1;
    // general-rq forms: dimension + upper-triangular coefficients (empty =
    // sum of squares of that dimension)
    int q1_dim = 3, q2_dim = 3;
    std::vector<i64> q1_coeffs, q2_coeffs;

    static const char* kind_name(Kind k);
    static Kind kind_from(const std::string& s);
    QuadForm form1() const;
    QuadForm form2() const;
    void validate() const;
    u64 hash() const;  // spec hash carried in the CSV header
};

struct ReportRow {
    std::string kind;
    i64 X = 0;
    i64 shift = 0;
    u128 empirical = 0;
    double predicted = 0.0;
    double ratio = 0.0;        // NaN when predicted == 0 (flagged row)
    double sigma_inf_val = 0.0;
    double sigma_finite = 0.0;
    double seconds = 0.0;
};

// CSV with columns exactly: kind,X,shift,empirical,predicted,ratio,sigma_inf,
// sigma_finite,seconds. Floats serialized at 17 significant digits.
std::string csv_header(const ExperimentSpec& spec);
std::string csv_row(const ReportRow& row);

// Runs the whole grid on a worker pool, streaming rows to `out` in grid order
// (shift-major, then X), flushing after each row.
void run_correlate(const ExperimentSpec& spec, std::ostream& out);

struct FitResult {
    i64 shift = 0;
    double slope = 0.0;
    double residual = 0.0;  // rms of log-log fit residuals
    int npoints = 0;
};

// Least-squares slope of log|empirical - predicted| vs log X, per shift.
// Throws on fewer than 2 usable points; fewer than 4 is flagged in npoints.
std::vector<FitResult> fit_exponent_csv(std::istream& csv);
FitResult fit_loglog(std::vector<std::pair<double, double>> pts);

u128 parse_u128(const std::string& s);

}  // namespace qc
