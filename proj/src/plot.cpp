#include "sst/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <limits>
#include <sstream>

#include "sst/io.hpp"

namespace sst {

namespace {

constexpr std::string_view kSweepHeader =
    "lambda,method,risk_mean,risk_sd,sure_mean,dof1_mean,dof2_mean,ht_d1_theory,ht_d2_theory";

// Fixed palette; series beyond it cycle.
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Row {
    double lambda;
    std::string method;
    double risk, sure, dof1, dof2, ht_d1, ht_d2;
};

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

double to_double(const std::string& s, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw InputError("sweep csv line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

std::vector<Row> parse_rows(std::string_view csv_text) {
    std::istringstream in{std::string(csv_text)};
    std::string line;
    if (!std::getline(in, line)) throw InputError("sweep csv is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSweepHeader) throw InputError("sweep csv header does not match the sweep schema");
    std::vector<Row> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) f.push_back(field);
        if (f.size() != 9) throw InputError("sweep csv line " + std::to_string(lineno) + ": expected 9 columns");
        rows.push_back({to_double(f[0], lineno), f[1], to_double(f[2], lineno), to_double(f[4], lineno),
                        to_double(f[5], lineno), to_double(f[6], lineno), to_double(f[7], lineno),
                        to_double(f[8], lineno)});
    }
    if (rows.empty()) throw InputError("sweep csv has no data rows");
    return rows;
}

}  // namespace

PlotKind parse_plot_kind(std::string_view name) {
    if (name == "dof") return PlotKind::Dof;
    if (name == "risk") return PlotKind::Risk;
    throw std::invalid_argument("plot kind must be 'dof' or 'risk'");
}

std::vector<Series> sweep_series(std::string_view csv_text, PlotKind kind) {
    const std::vector<Row> rows = parse_rows(csv_text);

    std::vector<std::string> order;
    for (const Row& r : rows) {
        if (std::find(order.begin(), order.end(), r.method) == order.end()) order.push_back(r.method);
    }

    std::vector<Series> out;
    if (kind == PlotKind::Dof) {
        std::string chosen;
        for (const auto& m : order) {
            if (m.rfind("sst", 0) == 0) {
                chosen = m;
                break;
            }
        }
        if (chosen.empty()) {
            for (const Row& r : rows) {
                if (std::isfinite(r.dof1)) {
                    chosen = r.method;
                    break;
                }
            }
        }
        if (chosen.empty()) throw InputError("sweep csv has no method with a DOF column");
        Series d1{"d1", {}, {}}, d2{"d2", {}, {}}, total{"d1+d2", {}, {}}, theory{"ht_d2_theory", {}, {}};
        for (const Row& r : rows) {
            if (r.method != chosen) continue;
            for (Series* s : {&d1, &d2, &total, &theory}) s->x.push_back(r.lambda);
            d1.y.push_back(r.dof1);
            d2.y.push_back(r.dof2);
            total.y.push_back(r.dof1 + r.dof2);
            theory.y.push_back(r.ht_d2);
        }
        out = {d1, d2, total, theory};
    } else {
        for (const auto& m : order) {
            Series risk{m + " risk", {}, {}};
            Series sure{m + " sure", {}, {}};
            for (const Row& r : rows) {
                if (r.method != m) continue;
                risk.x.push_back(r.lambda);
                risk.y.push_back(r.risk);
                if (std::isfinite(r.sure)) {
                    sure.x.push_back(r.lambda);
                    sure.y.push_back(r.sure);
                }
            }
            out.push_back(std::move(risk));
            if (!sure.x.empty()) out.push_back(std::move(sure));
        }
    }
    return out;
}

std::string render_svg(const std::vector<Series>& series, std::string_view title, std::string_view y_label) {
    constexpr double width = 720, height = 480;
    constexpr double left = 70, right = 170, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0.01;
        xmax = 10;
        ymin = 0;
        ymax = 1;
    }
    ymin = std::min(ymin, 0.0);
    if (xmax <= xmin) xmax = xmin * 10;
    if (ymax <= ymin) ymax = ymin + 1;
    const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
    const auto px = [&](double x) { return left + (std::log10(x) - lx0) / (lx1 - lx0) * plot_w; };
    const auto py = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * plot_h; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << fixed(width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
       << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << fixed(plot_w) << "\" height=\""
       << fixed(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    // Decade ticks on the x axis.
    for (int d = static_cast<int>(std::floor(lx0)); d <= static_cast<int>(std::ceil(lx1)); ++d) {
        const double x = std::pow(10.0, d);
        if (x < xmin * 0.999 || x > xmax * 1.001) continue;
        const std::string xs = fixed(px(x));
        os << "<line x1=\"" << xs << "\" y1=\"" << fixed(top) << "\" x2=\"" << xs << "\" y2=\""
           << fixed(top + plot_h) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << xs << "\" y=\"" << fixed(top + plot_h + 16) << "\" text-anchor=\"middle\">"
           << short_number(x) << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double y = ymin + (ymax - ymin) * i / 5.0;
        const std::string ys = fixed(py(y));
        os << "<line x1=\"" << fixed(left) << "\" y1=\"" << ys << "\" x2=\"" << fixed(left + plot_w)
           << "\" y2=\"" << ys << "\" stroke=\"#eeeeee\"/>\n";
        os << "<text x=\"" << fixed(left - 6) << "\" y=\"" << ys << "\" text-anchor=\"end\" dy=\"4\">"
           << short_number(y) << "</text>\n";
    }
    os << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << fixed(height - 18)
       << "\" text-anchor=\"middle\">lambda (log scale)</text>\n";
    os << "<text transform=\"translate(18," << fixed(top + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << y_label << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % std::size(kColors)];
        std::string pts;
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            const double x = series[s].x[i], y = series[s].y[i];
            if (!(x > 0.0) || !std::isfinite(y)) continue;
            if (!pts.empty()) pts += ' ';
            pts += fixed(px(x)) + ',' + fixed(py(y));
        }
        os << "<polyline class=\"series\" data-name=\"" << series[s].name << "\" fill=\"none\" stroke=\""
           << color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
        const double ly = top + 14 + 18.0 * static_cast<double>(s);
        os << "<line x1=\"" << fixed(left + plot_w + 12) << "\" y1=\"" << fixed(ly) << "\" x2=\""
           << fixed(left + plot_w + 36) << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << fixed(left + plot_w + 42) << "\" y=\"" << fixed(ly + 4) << "\">" << series[s].name
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace sst
