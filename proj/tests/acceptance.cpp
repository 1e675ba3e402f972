// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Each line carries the measured values so a failure can be read without a debugger.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "support.hpp"
#include "tsf/arima.hpp"
#include "tsf/decomposition.hpp"
#include "tsf/evaluation.hpp"
#include "tsf/fixture.hpp"
#include "tsf/regression.hpp"
#include "tsf/smoothing.hpp"

using namespace tsf;

namespace {

const MonthStamp kTrainEnd{2015, 12};

struct Check {
    bool ok = true;
    std::ostringstream note;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            note << " [miss: " << what << "]";
        }
    }
};

bool near(double v, double target, double tol) { return std::abs(v - target) <= tol; }

std::string fmt(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Check&)>& body) {
    Check c;
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.note << " [exception: " << e.what() << "]";
    }
    if (!c.ok) ++failures;
    std::printf("%s  %2d  %s:%s\n", c.ok ? "PASS" : "FAIL", id, title.c_str(), c.note.str().c_str());
    std::fflush(stdout);
}

const TimeSeries& fixture() {
    static const TimeSeries h = healthcare_fixture();
    return h;
}

const std::vector<MethodReport>& reports() {
    static const std::vector<MethodReport> all = [] {
        std::vector<MethodReport> out;
        for (auto m : kAllMethods) out.push_back(run_method(m, fixture(), kTrainEnd));
        return out;
    }();
    return all;
}

const MethodReport& report_for(Method m) { return reports()[static_cast<std::size_t>(m)]; }

struct Run {
    int status = -1;
    std::string out;
};

Run run_cli(const std::string& args) {
    const std::string cmd = std::string(TSF_CLI_PATH) + " " + args;
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

}  // namespace

int main() {
    report(1, "decomposition golden values", [](Check& c) {
        const auto dec = decompose(fixture());
        const double published[] = {22, -277, -186, -148, -265, -167, 28, 153, 297, 363, 78, 102};
        for (std::size_t m = 0; m < 12; ++m) {
            c.expect(near(dec.seasonal_figures[m], published[m], 1.0), "figure " + std::to_string(m + 1));
        }
        const double t_jul10 = *dec.trend[fixture().index_of({2010, 7})];
        const double t_jun16 = *dec.trend[fixture().index_of({2016, 6})];
        const double r_jul10 = *dec.random[fixture().index_of({2010, 7})];
        c.expect(near(t_jul10, 5768, 1), "trend 2010-07");
        c.expect(near(t_jun16, 15804, 1), "trend 2016-06");
        c.expect(near(r_jul10, -198, 2), "random 2010-07");
        for (std::size_t i = 0; i < fixture().size(); ++i) {
            const bool edge = i < 6 || i + 6 >= fixture().size();
            c.expect(dec.trend[i].has_value() != edge && dec.random[i].has_value() != edge,
                     "blank pattern at " + fixture().stamp_at(i).str());
        }
        c.note << " trend(2010-07)=" << fmt(t_jul10) << " trend(2016-06)=" << fmt(t_jun16)
               << " random(2010-07)=" << fmt(r_jul10);
    });

    report(2, "zero-sum seasonal figures", [](Check& c) {
        double worst = 0.0;
        auto check = [&](const TimeSeries& s) {
            const auto f = decompose(s).seasonal_figures;
            worst = std::max(worst, std::abs(std::accumulate(f.begin(), f.end(), 0.0)));
        };
        check(fixture());
        for (std::uint64_t seed = 1; seed <= 100; ++seed) check(fixtures::random_series(seed, 36 + seed % 48));
        c.expect(worst <= 1e-9, "sum within 1e-9");
        c.note << " worst |sum|=" << worst;
    });

    report(3, "contribution statistics", [](Check& c) {
        const auto dec = decompose(fixture());
        struct Want {
            Component which;
            double max, min, mean;
            MonthStamp argmax, argmin;
        };
        const Want wants[] = {
            {Component::seasonal, 5.92, -4.84, 1.95, {2011, 10}, {2011, 2}},
            {Component::trend, 113.24, 91.03, 100.35, {2014, 5}, {2010, 12}},
            {Component::random, 7.77, -10.67, 3.37, {2015, 3}, {2014, 5}},
        };
        for (const auto& w : wants) {
            const auto s = contribution(fixture(), dec, w.which);
            const std::string name = to_string(w.which);
            c.expect(near(s.stats.max, w.max, 0.05), name + " max");
            c.expect(near(s.stats.min, w.min, 0.05), name + " min");
            c.expect(near(s.reported_mean(), w.mean, 0.05), name + " mean");
            c.expect(s.argmax_stamp == w.argmax, name + " argmax");
            c.expect(s.argmin_stamp == w.argmin, name + " argmin");
            c.note << " " << name << "=" << fmt(s.stats.max) << "/" << fmt(s.stats.min) << "/"
                   << fmt(s.reported_mean()) << " (" << s.argmax_stamp.str() << "," << s.argmin_stamp.str() << ")";
        }
    });

    report(4, "correlogram cutoffs on differenced training slice", [](Check& c) {
        const auto train = fixture().head(kTrainEnd);
        const auto w = difference(train.values(), 1);
        const auto a = acf(w, 24);
        const auto p = pacf(w, 24);
        const int acf_cut = significance_cutoff(a);
        const int pacf_cut = significance_cutoff(p);
        c.expect(pacf_cut == 1, "pacf cutoff 1");
        c.expect(acf_cut == 2, "acf cutoff 2");
        std::string sig_a, sig_p;
        for (const auto& pt : a) {
            if (pt.lag > 0 && pt.significant) sig_a += std::to_string(pt.lag) + " ";
        }
        for (const auto& pt : p) {
            if (pt.significant) sig_p += std::to_string(pt.lag) + " ";
        }
        c.note << " acf_cutoff=" << acf_cut << " pacf_cutoff=" << pacf_cut << " significant acf lags {" << sig_a
               << "} pacf lags {" << sig_p << "}";
        // Informational only: the undifferenced slice, with lags read in years.
        const auto a0 = acf(train.values(), 24);
        const auto p0 = pacf(train.values(), 24);
        c.note << " | info: undifferenced cutoffs acf=" << significance_cutoff(a0)
               << " months pacf=" << significance_cutoff(p0) << " months";
    });

    report(5, "automatic order selection", [](Check& c) {
        const auto train = fixture().head(kTrainEnd);
        const auto sel = select_order(train.values());
        int rank = 0;
        for (std::size_t i = 0; i < sel.ranked.size(); ++i) {
            if (sel.ranked[i].order.str() == "(1,1,2)") rank = static_cast<int>(i) + 1;
        }
        c.expect(sel.order.str() == "(1,1,2)" || (rank >= 1 && rank <= 2), "(1,1,2) selected or top two");
        c.note << " selected=" << sel.order.str() << " aicc=" << fmt(sel.ranked[0].aicc) << "; (1,1,2) rank "
               << rank << " of " << sel.ranked.size();
        if (rank > 0) c.note << " aicc=" << fmt(sel.ranked[static_cast<std::size_t>(rank - 1)].aicc);
    });

    report(6, "ARIMA(1,1,2) reproduction", [](Check& c) {
        EvaluationOptions opt;
        opt.arima_order = ArimaOrder{1, 1, 2};
        const auto r = method_V(fixture(), kTrainEnd, opt);
        const double jan = r.rows[0].forecast;
        c.expect(near(jan, 15630, 0.03 * 15630), "Jan within 3%");
        double spread = 0.0;
        for (std::size_t a = 4; a < 12; ++a) {
            c.expect(near(r.rows[a].forecast, 16167, 0.03 * 16167), "plateau near 16167");
            for (std::size_t b = a + 1; b < 12; ++b) {
                spread = std::max(spread, std::abs(r.rows[a].forecast - r.rows[b].forecast));
            }
        }
        c.expect(spread < 5.0, "May-Dec pairwise spread < 5");
        c.expect(near(r.summary->rmse, 740, 74), "rmse within 10% of 740");
        c.note << " Jan=" << fmt(jan) << " Dec=" << fmt(r.rows[11].forecast) << " spread=" << fmt(spread)
               << " rmse=" << fmt(r.summary->rmse);
    });

    report(7, "Method IV reproduction", [](Check& c) {
        const auto& r = report_for(Method::IV);
        const auto best = std::min_element(r.rows.begin(), r.rows.end(), [](const auto& a, const auto& b) {
            return std::abs(a.pct_error) < std::abs(b.pct_error);
        });
        c.expect(near(r.summary->rmse, 1339, 0.03 * 1339), "rmse within 3%");
        c.expect(best->stamp == MonthStamp{2016, 2}, "min |error| in 2016-02");
        c.expect(near(std::abs(r.rows[0].pct_error), 13.37, 0.5), "first-month error");
        c.note << " rmse=" << fmt(r.summary->rmse) << " min |error| " << fmt(std::abs(best->pct_error)) << " at "
               << best->stamp.str() << " first=" << fmt(std::abs(r.rows[0].pct_error));
    });

    report(8, "Methods I, II, III, VI RMSE bands", [](Check& c) {
        const std::pair<Method, double> targets[] = {
            {Method::I, 2863}, {Method::II, 894}, {Method::III, 1782}, {Method::VI, 800}};
        for (const auto& [m, target] : targets) {
            const double rmse = report_for(m).summary->rmse;
            c.expect(near(rmse, target, 0.10 * target), std::string("Method ") + to_string(m));
            c.note << " " << to_string(m) << "=" << fmt(rmse) << " (band " << fmt(0.9 * target, 1) << ".."
                   << fmt(1.1 * target, 1) << ")";
        }
    });

    report(9, "ranking and shared first rows", [](Check& c) {
        const auto cmp = compare(reports());
        auto highest = cmp.rows.front();
        for (const auto& row : cmp.rows) {
            if (row.metrics.rmse > highest.metrics.rmse) highest = row;
        }
        c.expect(cmp.best == Method::V, "Method V lowest");
        c.expect(highest.method == Method::I, "Method I highest");
        c.expect(report_for(Method::II).rows[0].forecast == report_for(Method::I).rows[0].forecast, "II row 1 = I row 1");
        c.expect(report_for(Method::VI).rows[0].forecast == report_for(Method::V).rows[0].forecast, "VI row 1 = V row 1");
        c.note << " lowest=" << to_string(cmp.best) << " highest=" << to_string(highest.method) << " rmse:";
        for (const auto& row : cmp.rows) c.note << " " << to_string(row.method) << "=" << fmt(row.metrics.rmse, 1);
        c.note << "; Method V order " << report_for(Method::V).models.front();
    });

    report(10, "property suites", [](Check& c) {
        // reconstruction identity
        double worst_rec = 0.0;
        for (std::uint64_t seed = 1; seed <= 200; ++seed) {
            const auto s = fixtures::random_series(seed, 24 + seed % 72, MonthStamp{1999, static_cast<int>(1 + seed % 12)});
            const auto dec = decompose(s);
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (dec.trend[i]) worst_rec = std::max(worst_rec, std::abs(*dec.trend[i] + dec.seasonal[i] + *dec.random[i] - s[i]) / std::abs(s[i]));
            }
        }
        c.expect(worst_rec < 1e-12, "reconstruction");

        // Durbin-Levinson against a direct Yule-Walker solve
        std::mt19937_64 rng(17);
        std::normal_distribution<double> e(0.0, 1.0);
        std::vector<double> x(500);
        for (std::size_t t = 2; t < x.size(); ++t) x[t] = 0.5 * x[t - 1] - 0.2 * x[t - 2] + e(rng);
        const auto p = pacf(x, 20);
        const auto r = detail::autocorrelations(x, 20);
        double worst_dl = 0.0;
        for (int k = 1; k <= 20; ++k) {
            Eigen::MatrixXd R(k, k);
            Eigen::VectorXd rhs(k);
            for (int i = 0; i < k; ++i) {
                rhs(i) = r[static_cast<std::size_t>(i + 1)];
                for (int j = 0; j < k; ++j) R(i, j) = r[static_cast<std::size_t>(std::abs(i - j))];
            }
            const Eigen::VectorXd phi = R.colPivHouseholderQr().solve(rhs);
            worst_dl = std::max(worst_dl, std::abs(phi(k - 1) - p[static_cast<std::size_t>(k - 1)].value));
        }
        c.expect(worst_dl <= 1e-8, "Durbin-Levinson vs Yule-Walker");

        // CSS optimum against an 11-point-per-axis grid of partial autocorrelations
        const auto train = fixture().head(kTrainEnd);
        const auto w = difference(train.values(), 1);
        const auto fit = css_fit(train.values(), {1, 1, 2});
        double grid = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 10; ++i) {
            for (int j = 0; j <= 10; ++j) {
                for (int k = 0; k <= 10; ++k) {
                    auto in = [](int v) { return -0.95 + 0.19 * v; };
                    const auto phi = pacf_to_coefficients(std::vector<double>{in(i)});
                    auto theta = pacf_to_coefficients(std::vector<double>{in(j), in(k)});
                    for (auto& t : theta) t = -t;
                    grid = std::min(grid, css_value(w, phi, theta));
                }
            }
        }
        c.expect(fit.css <= grid + 1e-9, "CSS beats grid");

        // OLS against a brute-force grid
        std::vector<double> y(10);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = 2.0 + 0.7 * static_cast<double>(i) + e(rng);
        const auto line = ols_fit(y);
        double grid_sse = std::numeric_limits<double>::infinity();
        for (int i = -100; i <= 100; ++i) {
            for (int j = -100; j <= 100; ++j) {
                double s = 0.0;
                for (std::size_t t = 0; t < y.size(); ++t) {
                    s += std::pow(y[t] - (line.intercept + 0.01 * i) - (line.slope + 0.002 * j) * static_cast<double>(t), 2);
                }
                grid_sse = std::min(grid_sse, s);
            }
        }
        c.expect(line.residual_sse <= grid_sse + 1e-9, "OLS vs grid");

        // difference / integrate round trip
        bool round_trip = true;
        std::uniform_int_distribution<int> val(-500, 500);
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> z(15 + rep);
            for (auto& v : z) v = val(rng);
            for (int d = 0; d <= 2; ++d) {
                auto back = undifference(difference(z, d), std::vector<double>(z.begin(), z.begin() + d), d);
                back.insert(back.begin(), z.begin(), z.begin() + d);
                round_trip = round_trip && back == z;
            }
        }
        c.expect(round_trip, "difference round trip");

        // Holt-Winters on an exact signal
        const auto sig = fixtures::exact_signal(700.0, 3.0, fixtures::seasonal_shape(), 96);
        const auto hw = hw_fit(sig, SmoothingSpec::holt_winters());
        c.expect(hw.sse < 1e-6 * static_cast<double>(sig.size()), "HW exact signal");

        c.note << " reconstruction rel err " << worst_rec << ", DL-YW " << worst_dl << ", css " << fmt(fit.css, 1)
               << " <= grid " << fmt(grid, 1) << ", ols sse " << fmt(line.residual_sse, 4) << " <= " << fmt(grid_sse, 4)
               << ", round trip " << (round_trip ? "exact" : "broken") << ", HW sse " << hw.sse;
    });

    report(11, "CLI end-to-end evaluate", [](Check& c) {
        const std::string args = "evaluate --input fixture --train-end 2015-12 --format json";
        const auto first = run_cli(args);
        const auto second = run_cli(args);
        c.expect(first.status == 0, "exit 0");
        c.expect(first.out == second.out, "byte-identical");
        const auto j = nlohmann::json::parse(first.out);
        c.expect(j["reports"].size() == 6, "six reports");
        const std::string best = j["comparison"]["best"];
        c.expect(best == "V", "comparison names Method V");
        c.note << " exit=" << first.status << " reports=" << j["reports"].size() << " best=" << best
               << " identical=" << (first.out == second.out ? "yes" : "no") << " bytes=" << first.out.size();
    });

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
