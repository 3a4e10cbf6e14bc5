#include "rocq/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "rocq/errors.hpp"
#include "rocq/stats.hpp"

namespace rocq {

namespace {

using nlohmann::json;

constexpr const char* kPalette[] = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
};

// Shortest round-trip representation, for the lossless CSV/JSON outputs.
std::string format_full(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Text-table helper: pads cells and right-aligns every column but the first.
std::string layout_table(const std::vector<std::vector<std::string>>& cells) {
    std::vector<std::size_t> widths;
    for (const auto& row : cells) {
        if (widths.size() < row.size()) {
            widths.resize(row.size(), 0);
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::ostringstream os;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) {
                os << "  ";
            }
            const std::string& cell = row[c];
            if (c == 0) {
                os << cell << std::string(widths[c] - cell.size(), ' ');
            } else {
                os << std::string(widths[c] - cell.size(), ' ') << cell;
            }
        }
        os << '\n';
    }
    return os.str();
}

std::string csv_join(const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) {
                os << ',';
            }
            os << row[c];
        }
        os << '\n';
    }
    return os.str();
}

std::string tick_label(double v) {
    char buf[32];
    if (v >= 999999.5) {
        std::snprintf(buf, sizeof(buf), "%.3gM", v / 1e6);
    } else if (v >= 999.5) {
        std::snprintf(buf, sizeof(buf), "%.3gk", v / 1e3);
    } else {
        std::snprintf(buf, sizeof(buf), "%.3g", v);
    }
    return buf;
}

}  // namespace

std::string format_probability(double p) {
    // Truncated, not rounded: 51/52 prints as 0.980. The epsilon shields
    // values that are exact 3-decimal quantities from representation error.
    const double t = std::floor(p * 1000.0 + 1e-9) / 1000.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", t);
    return buf;
}

std::string format_usd(double usd) {
    return std::to_string(std::llround(usd));
}

std::string format_usd_grouped(double usd) {
    const long long v = std::llround(usd);
    std::string digits = std::to_string(v < 0 ? -v : v);
    std::string grouped;
    const std::size_t n = digits.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && (n - i) % 3 == 0) {
            grouped += ',';
        }
        grouped += digits[i];
    }
    return v < 0 ? "-" + grouped : grouped;
}

std::string format_roc(double roc) {
    // llround(0) never yields a negative zero, so -0.0001 prints as "0.00".
    return fmt2(static_cast<double>(std::llround(roc * 100.0)) / 100.0);
}

std::string render_vulnerability_table(
    const std::vector<ScenarioConfig>& scenarios, TableFormat format) {
    if (scenarios.empty()) {
        throw std::invalid_argument("render_vulnerability_table: no scenarios");
    }
    std::set<std::string> vulns;
    for (const auto& [id, outcome] : scenarios.front().outcomes) {
        (void)outcome;
        vulns.insert(id);
    }
    for (const ScenarioConfig& s : scenarios) {
        std::set<std::string> other;
        for (const auto& [id, outcome] : s.outcomes) {
            (void)outcome;
            other.insert(id);
        }
        if (other != vulns) {
            throw ValidationError("scenario \"" + s.name +
                                  "\" has a mismatched vulnerability set");
        }
    }

    if (format == TableFormat::Json) {
        json j;
        j["scenarios"] = json::array();
        for (const ScenarioConfig& s : scenarios) {
            j["scenarios"].push_back(s.name);
        }
        j["rows"] = json::object();
        for (const std::string& id : vulns) {
            json row;
            row["trials"] = scenarios.front().outcomes.at(id).trials;
            row["outcomes"] = json::object();
            for (const ScenarioConfig& s : scenarios) {
                const ProbeOutcome& o = s.outcomes.at(id);
                row["outcomes"][s.name] = {
                    {"trials", o.trials},
                    {"failures", o.failures},
                    {"lrs", laplace_success(o.failures, o.trials)},
                };
            }
            j["rows"][id] = std::move(row);
        }
        return j.dump(2) + "\n";
    }

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"vulnerability", "trials"};
    for (const ScenarioConfig& s : scenarios) {
        header.push_back(s.name + "_failures");
        header.push_back(s.name + "_lrs");
    }
    rows.push_back(std::move(header));
    for (const std::string& id : vulns) {
        std::vector<std::string> row{
            id, std::to_string(scenarios.front().outcomes.at(id).trials)};
        for (const ScenarioConfig& s : scenarios) {
            const ProbeOutcome& o = s.outcomes.at(id);
            row.push_back(std::to_string(o.failures));
            row.push_back(format_probability(laplace_success(o.failures, o.trials)));
        }
        rows.push_back(std::move(row));
    }
    return format == TableFormat::Csv ? csv_join(rows) : layout_table(rows);
}

std::string render_risk_table(const RiskComparison& comparison,
                              TableFormat format) {
    if (format == TableFormat::Json) {
        json j;
        j["baseline"] = comparison.baseline_name;
        j["controls"] = comparison.control_names;
        j["control_costs"] = json::object();
        for (const auto& [name, cost] : comparison.control_costs) {
            j["control_costs"][name] = cost;
        }
        j["rows"] = json::object();
        for (const auto& [id, row] : comparison.rows) {
            json r;
            r["baseline_el"] = row.baseline_el;
            r["controls"] = json::object();
            for (const auto& [name, cell] : row.controls) {
                r["controls"][name] = {{"el", cell.el}, {"roc", cell.roc}};
            }
            j["rows"][id] = std::move(r);
        }
        json t;
        t["baseline_el"] = comparison.totals.baseline_el;
        t["controls"] = json::object();
        for (const auto& [name, cell] : comparison.totals.controls) {
            t["controls"][name] = {{"el", cell.el}, {"roc", cell.roc}};
        }
        j["total"] = std::move(t);
        return j.dump(2) + "\n";
    }

    const bool grouped = format == TableFormat::Table;
    const auto usd = [&](double v) {
        return grouped ? format_usd_grouped(v) : format_usd(v);
    };

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"vulnerability", "baseline_el_usd"};
    for (const std::string& name : comparison.control_names) {
        header.push_back(name + "_el_usd");
        header.push_back(name + "_roc");
    }
    rows.push_back(std::move(header));
    const auto emit = [&](const std::string& label, const RiskRow& row) {
        std::vector<std::string> cells{label, usd(row.baseline_el)};
        for (const std::string& name : comparison.control_names) {
            const ControlCell& cell = row.controls.at(name);
            cells.push_back(usd(cell.el));
            cells.push_back(format_roc(cell.roc));
        }
        rows.push_back(std::move(cells));
    };
    for (const auto& [id, row] : comparison.rows) {
        emit(id, row);
    }
    emit("total", comparison.totals);
    return format == TableFormat::Csv ? csv_join(rows) : layout_table(rows);
}

std::string lec_to_csv(const LecCurve& curve) {
    std::ostringstream os;
    os << "threshold_usd,exceedance_probability\n";
    for (const LecPoint& point : curve.points) {
        os << format_full(point.threshold_usd) << ','
           << format_full(point.exceedance_probability) << '\n';
    }
    return os.str();
}

std::string emit_lec_svg(const std::vector<LabeledCurve>& curves,
                         const RenderOptions& options) {
    if (curves.empty()) {
        throw std::invalid_argument("emit_lec_svg: no curves");
    }
    for (const LabeledCurve& c : curves) {
        if (c.curve.vulnerability != curves.front().curve.vulnerability) {
            throw ValidationError(
                "all curves in one figure must describe the same vulnerability");
        }
    }

    // Fixed geometry; deterministic bytes are part of the contract.
    constexpr double kHeight = 500.0;
    constexpr double kLeft = 80.0, kRight = 630.0;
    constexpr double kTop = 50.0, kBottom = 440.0;
    const bool log_scale = options.scale == AxisScale::Log;

    double max_threshold = 0.0;
    double min_positive = 0.0;
    for (const LabeledCurve& c : curves) {
        for (const LecPoint& p : c.curve.points) {
            max_threshold = std::max(max_threshold, p.threshold_usd);
            if (p.threshold_usd > 0.0 &&
                (min_positive == 0.0 || p.threshold_usd < min_positive)) {
                min_positive = p.threshold_usd;
            }
        }
    }
    double lo = log_scale ? (min_positive > 0.0 ? min_positive : 1.0) : 0.0;
    double hi = max_threshold;
    if (hi <= lo) {
        hi = log_scale ? lo * 10.0 : std::max(1.0, lo + 1.0);
    }

    const auto map_x = [&](double t) {
        double frac;
        if (log_scale) {
            frac = t <= lo ? 0.0
                           : (std::log10(t) - std::log10(lo)) /
                                 (std::log10(hi) - std::log10(lo));
        } else {
            frac = (t - lo) / (hi - lo);
        }
        frac = std::clamp(frac, 0.0, 1.0);
        return kLeft + frac * (kRight - kLeft);
    };
    const auto map_y = [&](double p) {
        return kTop + (1.0 - std::clamp(p, 0.0, 1.0)) * (kBottom - kTop);
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
           "width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n"
        << "<text x=\"400\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" "
           "text-anchor=\"middle\">Loss exceedance curve: "
        << xml_escape(curves.front().curve.vulnerability) << "</text>\n";

    // y gridlines and labels: 0.0 to 1.0 in steps of 0.2
    for (int i = 0; i <= 5; ++i) {
        const double p = static_cast<double>(i) / 5.0;
        const std::string y = fmt2(map_y(p));
        svg << "<line x1=\"" << fmt2(kLeft) << "\" y1=\"" << y << "\" x2=\""
            << fmt2(kRight) << "\" y2=\"" << y
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << fmt2(kLeft - 8.0) << "\" y=\"" << y
            << "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"end\" dominant-baseline=\"middle\">"
            << fmt2(p).substr(0, 3) << "</text>\n";
    }
    // x axis: 10 ticks
    for (int i = 0; i < 10; ++i) {
        const double frac = static_cast<double>(i) / 9.0;
        const double t =
            log_scale ? lo * std::pow(hi / lo, frac) : lo + (hi - lo) * frac;
        const std::string x = fmt2(map_x(t));
        svg << "<line x1=\"" << x << "\" y1=\"" << fmt2(kBottom) << "\" x2=\"" << x
            << "\" y2=\"" << fmt2(kBottom + 5.0)
            << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << x << "\" y=\"" << fmt2(kBottom + 18.0)
            << "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"middle\">"
            << xml_escape(tick_label(t)) << "</text>\n";
    }
    // axes
    svg << "<line x1=\"" << fmt2(kLeft) << "\" y1=\"" << fmt2(kTop) << "\" x2=\""
        << fmt2(kLeft) << "\" y2=\"" << fmt2(kBottom)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
        << "<line x1=\"" << fmt2(kLeft) << "\" y1=\"" << fmt2(kBottom)
        << "\" x2=\"" << fmt2(kRight) << "\" y2=\"" << fmt2(kBottom)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << fmt2((kLeft + kRight) / 2.0) << "\" y=\""
        << fmt2(kHeight - 14.0)
        << "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\">Loss (USD"
        << (log_scale ? ", log scale" : "") << ")</text>\n"
        << "<text x=\"22\" y=\"" << fmt2((kTop + kBottom) / 2.0)
        << "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\" transform=\"rotate(-90 22 "
        << fmt2((kTop + kBottom) / 2.0) << ")\">P(Loss &gt; L)</text>\n";

    // curves
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const auto& points = curves[i].curve.points;
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < points.size(); ++k) {
            if (k > 0) {
                svg << ' ';
            }
            svg << fmt2(map_x(points[k].threshold_usd)) << ','
                << fmt2(map_y(points[k].exceedance_probability));
        }
        svg << "\"/>\n";
        if (points.size() == 1) {
            // a one-point curve would otherwise be invisible
            svg << "<circle cx=\"" << fmt2(map_x(points[0].threshold_usd))
                << "\" cy=\"" << fmt2(map_y(points[0].exceedance_probability))
                << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        }
    }

    // legend
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const double y = kTop + 14.0 + static_cast<double>(i) * 18.0;
        svg << "<line x1=\"645\" y1=\"" << fmt2(y) << "\" x2=\"668\" y2=\""
            << fmt2(y) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n"
            << "<text x=\"674\" y=\"" << fmt2(y + 4.0)
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << xml_escape(curves[i].label) << "</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace rocq
