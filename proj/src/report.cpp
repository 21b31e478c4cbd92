#include "quadcorr/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qc {

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

u64 fnv_mix(u64 h, u64 v) {
    for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xff;
        h *= 1099511628211ULL;
    }
    return h;
}

// Shared per-spec state built once and reused across grid points.
struct SharedTables {
    // split
    ClassNumberTable class_table;
    // nonsplit: per-d reduced-form counts along n^2+d
    std::map<i64, std::vector<std::uint32_t>> quad_tables;
    // r2 / rq
    std::vector<std::uint32_t> t1, t2;  // r_{Q1} to maxY, r_{Q2} to maxX
    // finite Euler products per shift
    std::map<i64, EulerProduct> euler;
};

SharedTables build_shared(const ExperimentSpec& spec) {
    SharedTables sh;
    i64 maxX = spec.Xs.back(), maxL = spec.shifts.back();
    switch (spec.kind) {
        case ExperimentSpec::Kind::Split:
            sh.class_table = ClassNumberTable::build(maxX + maxL, spec.threads);
            for (i64 l : spec.shifts) sh.euler[l] = sigma_hat(l, spec.pmax, spec.cache_dir);
            break;
        case ExperimentSpec::Kind::Nonsplit:
            for (i64 d : spec.shifts) {
                sh.quad_tables[d] = reduced_form_count_quadratic(maxX, d, spec.threads);
                sh.euler[d] = sigma_tilde(d, spec.pmax, spec.cache_dir);
            }
            break;
        case ExperimentSpec::Kind::TwoSquares:
        case ExperimentSpec::Kind::GeneralRQ: {
            QuadForm Q1 = spec.form1(), Q2 = spec.form2();
            sh.t1 = rq_sieve_cached(Q1, maxX + maxL, spec.cache_dir, spec.threads).counts;
            sh.t2 = rq_sieve_cached(Q2, maxX, spec.cache_dir, spec.threads).counts;
            for (i64 l : spec.shifts)
                sh.euler[l] = euler_cp(LocalProblem::plain(Q1, Q2, l), spec.pmax, spec.cache_dir);
            break;
        }
    }
    return sh;
}

ReportRow make_row(const ExperimentSpec& spec, const SharedTables& sh, i64 X, i64 l) {
    double t0 = now_seconds();
    ReportRow row;
    row.kind = ExperimentSpec::kind_name(spec.kind);
    row.X = X;
    row.shift = l;
    const EulerProduct& ep = sh.euler.at(l);
    row.sigma_finite = ep.value;
    switch (spec.kind) {
        case ExperimentSpec::Kind::Split: {
            row.empirical = empirical_D(sh.class_table, X, l);
            row.sigma_inf_val = sigma_inf(double(X), double(l));
            row.predicted = row.sigma_inf_val * ep.value / 576.0 * std::pow(double(X), 1.5) *
                            std::sqrt(double(X + l));
            break;
        }
        case ExperimentSpec::Kind::Nonsplit: {
            const auto& h = sh.quad_tables.at(l);
            u128 s = 0;
            for (i64 n = 1; n <= X; ++n) {
                i64 m = n * n + l;
                FundClass fc = classify_discriminant(-m);
                if (fc.kind == FundKind::NotFundamental || fc.residue_mod8 == 1) continue;
                s += u128(h[std::size_t(n)]);
            }
            row.empirical = s;
            row.sigma_inf_val = gamma_inf_nonsplit(double(X), double(l));
            row.predicted = row.sigma_inf_val * ep.value / 24.0 * double(X) *
                            std::sqrt(double(X) * double(X) + double(l));
            break;
        }
        case ExperimentSpec::Kind::TwoSquares: {
            u128 s = 0;
            for (i64 n = 1; n <= X; ++n) s += u128(sh.t2[std::size_t(n)]) * sh.t1[std::size_t(n + l)];
            row.empirical = s;
            row.sigma_inf_val = M_PI * M_PI;  // c_inf for two discs, every l >= 0
            row.predicted = row.sigma_inf_val * ep.value * double(X);
            break;
        }
        case ExperimentSpec::Kind::GeneralRQ: {
            u128 s = 0;
            for (i64 n = 1; n <= X; ++n) s += u128(sh.t2[std::size_t(n)]) * sh.t1[std::size_t(n + l)];
            row.empirical = s;
            QuadForm Q1 = spec.form1(), Q2 = spec.form2();
            WindowSpec w = WindowSpec::sharp(Q1.dim(), Q2.dim(), Q1.gram_det(), Q2.gram_det());
            row.sigma_inf_val = c_inf_window(w, double(X), double(l));
            row.predicted = row.sigma_inf_val * ep.value *
                            std::pow(double(X + l), Q1.dim() / 2.0 - 1.0) *
                            std::pow(double(X), Q2.dim() / 2.0);
            break;
        }
    }
    row.ratio = row.predicted != 0.0 ? double(row.empirical) / row.predicted
                                     : std::numeric_limits<double>::quiet_NaN();
    row.seconds = now_seconds() - t0;
    return row;
}

}  // namespace

const char* ExperimentSpec::kind_name(Kind k) {
    switch (k) {
        case Kind::Split: return "split";
        case Kind::Nonsplit: return "nonsplit";
        case Kind::TwoSquares: return "r2";
        case Kind::GeneralRQ: return "rq";
    }
    return "?";
}

ExperimentSpec::Kind ExperimentSpec::kind_from(const std::string& s) {
    if (s == "split") return Kind::Split;
    if (s == "nonsplit") return Kind::Nonsplit;
    if (s == "r2") return Kind::TwoSquares;
    if (s == "rq") return Kind::GeneralRQ;
    throw std::invalid_argument("unknown kind: " + s);
}

QuadForm ExperimentSpec::form1() const {
    if (kind == Kind::TwoSquares) return QuadForm::sum_of_squares(2);
    return q1_coeffs.empty() ? QuadForm::sum_of_squares(q1_dim) : QuadForm(q1_dim, q1_coeffs);
}

QuadForm ExperimentSpec::form2() const {
    if (kind == Kind::TwoSquares) return QuadForm::sum_of_squares(2);
    return q2_coeffs.empty() ? QuadForm::sum_of_squares(q2_dim) : QuadForm(q2_dim, q2_coeffs);
}

void ExperimentSpec::validate() const {
    if (Xs.empty() || shifts.empty()) throw std::invalid_argument("spec: empty grid");
    if (!std::is_sorted(Xs.begin(), Xs.end()) || !std::is_sorted(shifts.begin(), shifts.end()))
        throw std::invalid_argument("spec: grids must be ascending");
    if (Xs.front() < 1) throw std::invalid_argument("spec: X >= 1 required");
    if (shifts.front() < 0) throw std::invalid_argument("spec: shift >= 0 required");
    if (pmax < 3) throw std::invalid_argument("spec: pmax >= 3 required");
    if (kind == Kind::TwoSquares && shifts.front() < 1)
        throw std::invalid_argument("spec: r2 kind requires l >= 1");
    if (kind == Kind::GeneralRQ) {
        if (!form1().is_positive_definite() || !form2().is_positive_definite())
            throw std::invalid_argument("spec: forms must be positive definite");
    }
    i64 capX = (kind == Kind::Nonsplit) ? 3000000 : 200000000;
    if (Xs.back() > capX) throw std::invalid_argument("spec: X beyond capacity for this kind");
}

u64 ExperimentSpec::hash() const {
    u64 h = 0xcbf29ce484222325ULL;
    h = fnv_mix(h, u64(kind));
    for (i64 x : Xs) h = fnv_mix(h, u64(x));
    h = fnv_mix(h, 0xffULL);
    for (i64 l : shifts) h = fnv_mix(h, u64(l));
    h = fnv_mix(h, u64(pmax));
    h = fnv_mix(h, u64(Z));
    h = fnv_mix(h, u64(q1_dim));
    for (i64 c : q1_coeffs) h = fnv_mix(h, u64(c));
    h = fnv_mix(h, u64(q2_dim));
    for (i64 c : q2_coeffs) h = fnv_mix(h, u64(c));
    return h;
}

std::string csv_header(const ExperimentSpec& spec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "# quadcorr spec=%016llx\n", (unsigned long long)spec.hash());
    return std::string(buf) + "kind,X,shift,empirical,predicted,ratio,sigma_inf,sigma_finite,seconds\n";
}

std::string csv_row(const ReportRow& r) {
    std::ostringstream os;
    char sec[32];
    std::snprintf(sec, sizeof(sec), "%.3f", r.seconds);
    os << r.kind << "," << r.X << "," << r.shift << "," << to_string_u128(r.empirical) << ","
       << fmt17(r.predicted) << "," << fmt17(r.ratio) << "," << fmt17(r.sigma_inf_val) << ","
       << fmt17(r.sigma_finite) << "," << sec << "\n";
    return os.str();
}

void run_correlate(const ExperimentSpec& spec, std::ostream& out) {
    spec.validate();
    out << csv_header(spec);
    out.flush();
    SharedTables sh = build_shared(spec);

    struct Cell {
        i64 X, l;
    };
    std::vector<Cell> grid;
    for (i64 l : spec.shifts)
        for (i64 X : spec.Xs) grid.push_back({X, l});

    // sliding window of futures; single consumer emits rows in grid order
    std::size_t window = std::size_t(std::max(1, spec.threads));
    std::vector<std::future<ReportRow>> fut(grid.size());
    std::size_t launched = 0;
    auto launch = [&](std::size_t i) {
        fut[i] = std::async(std::launch::async,
                            [&spec, &sh, cell = grid[i]] { return make_row(spec, sh, cell.X, cell.l); });
    };
    for (; launched < std::min(window, grid.size()); ++launched) launch(launched);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ReportRow row = fut[i].get();
        if (launched < grid.size()) launch(launched++);
        out << csv_row(row);
        out.flush();
    }
}

FitResult fit_loglog(std::vector<std::pair<double, double>> pts) {
    FitResult r;
    r.npoints = int(pts.size());
    if (pts.size() < 2) throw std::invalid_argument("fit_loglog: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = double(pts.size());
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("fit_loglog: degenerate grid");
    r.slope = (n * sxy - sx * sy) / denom;
    double icpt = (sy - r.slope * sx) / n;
    double ss = 0;
    for (auto [x, y] : pts) {
        double e = y - (icpt + r.slope * x);
        ss += e * e;
    }
    r.residual = std::sqrt(ss / n);
    return r;
}

u128 parse_u128(const std::string& s) {
    u128 v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') throw std::invalid_argument("parse_u128: bad digit");
        v = v * 10 + u128(ch - '0');
    }
    return v;
}

std::vector<FitResult> fit_exponent_csv(std::istream& csv) {
    std::map<i64, std::vector<std::pair<double, double>>> by_shift;
    std::string line;
    while (std::getline(csv, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("kind,", 0) == 0) continue;
        std::vector<std::string> cols;
        std::istringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cols.push_back(c);
        if (cols.size() < 6) continue;
        i64 X = std::stoll(cols[1]), shift = std::stoll(cols[2]);
        double emp = double(parse_u128(cols[3]));
        double pred = std::stod(cols[4]);
        double diff = std::fabs(emp - pred);
        if (diff <= 0 || X < 1) continue;
        by_shift[shift].emplace_back(std::log(double(X)), std::log(diff));
    }
    std::vector<FitResult> out;
    for (auto& [shift, pts] : by_shift) {
        FitResult r = fit_loglog(std::move(pts));
        r.shift = shift;
        out.push_back(r);
    }
    if (out.empty()) throw std::invalid_argument("fit_exponent: no usable rows");
    return out;
}

}  // namespace qc
