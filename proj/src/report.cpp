#include "clpwan/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "clpwan/strfmt.hpp"

namespace clpwan {

std::string metrics_to_csv(const RunResult& result, const Mode& mode) {
    const std::string mode_name = to_string(mode);
    std::string out = "t_s,device_id,mode,chosen,delay_s,energy_j,tier,feasible,entropy,admitted\n";
    for (const auto& r : result.records) {
        out += fmt_g(r.t_s);
        out += ',';
        out += std::to_string(r.device_id);
        out += ',';
        out += mode_name;
        out += ',';
        out += to_string(r.chosen);
        out += ',';
        out += fmt_g(r.delay_s);
        out += ',';
        out += fmt_g(r.energy_j);
        out += ',';
        out += to_string(r.tier);
        out += ',';
        out += r.feasible ? "1" : "0";
        out += ',';
        out += fmt_g(r.entropy_nats);
        out += ',';
        out += r.admitted ? "1" : "0";
        out += '\n';
    }
    return out;
}

std::string decisions_to_csv(const std::vector<DecisionLogRow>& rows) {
    std::string out = "decision_id,t_s,device_id,chosen,entropy,admitted\n";
    for (const auto& r : rows) {
        out += std::to_string(r.decision_id);
        out += ',';
        out += fmt_g(r.t_s);
        out += ',';
        out += std::to_string(r.device_id);
        out += ',';
        out += to_string(r.chosen);
        out += ',';
        out += fmt_exact(r.entropy_nats);
        out += ',';
        out += r.admitted ? "1" : "0";
        out += '\n';
    }
    return out;
}

namespace {

std::string bucket_hi(uint64_t high_bytes) {
    return high_bytes == 0 ? "inf" : std::to_string(high_bytes);
}

void append_stats_row(std::string& out, const std::string& mode, const std::string& scope,
                      const std::string& lo, const std::string& hi, size_t requests,
                      size_t infeasible, double mean_delay, double p95_delay, double energy) {
    out += mode + ',' + scope + ',' + lo + ',' + hi + ',' + std::to_string(requests) + ',' +
           std::to_string(infeasible) + ',' + fmt_g(mean_delay) + ',' + fmt_g(p95_delay) + ',' +
           fmt_g(energy) + '\n';
}

} // namespace

std::string comparison_to_csv(const ComparisonTable& table) {
    std::string out =
        "mode,scope,bucket_low_bytes,bucket_high_bytes,requests,infeasible,"
        "mean_delay_s,p95_delay_s,total_energy_j\n";
    for (const auto& row : table.rows) {
        const std::string mode = to_string(row.mode);
        append_stats_row(out, mode, "all", "", "", row.requests, row.infeasible, row.mean_delay_s,
                         row.p95_delay_s, row.total_energy_j);
        for (const auto& b : row.buckets)
            append_stats_row(out, mode, "bucket", std::to_string(b.low_bytes),
                             bucket_hi(b.high_bytes), b.requests, b.infeasible, b.mean_delay_s,
                             b.p95_delay_s, b.total_energy_j);
    }
    return out;
}

namespace {

// Minimal log-log chart. One series per mode over bucket midpoints; buckets
// without feasible traffic are skipped.
struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

double bucket_mid(const BucketStats& b) {
    const double lo = b.low_bytes == 0 ? 1.0 : static_cast<double>(b.low_bytes);
    const double hi = b.high_bytes == 0 ? lo * 4.0 : static_cast<double>(b.high_bytes);
    return std::sqrt(lo * hi);
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string chart_svg(const std::string& title, const std::string& y_label,
                      const std::vector<Series>& series) {
    constexpr double width = 720, height = 480;
    constexpr double left = 80, right = 40, top = 50, bottom = 60;

    double xmin = std::numeric_limits<double>::infinity(), xmax = 0;
    double ymin = std::numeric_limits<double>::infinity(), ymax = 0;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmin < xmax)) xmax = xmin + 1;
    if (!std::isfinite(ymin) || !(ymin < ymax)) {
        ymin = std::isfinite(ymin) ? ymin / 2 : 0.1;
        ymax = ymin * 10;
    }

    const double lx0 = std::floor(std::log10(xmin)), lx1 = std::ceil(std::log10(xmax));
    const double ly0 = std::floor(std::log10(ymin)), ly1 = std::ceil(std::log10(ymax));
    auto sx = [&](double v) {
        return left + (std::log10(v) - lx0) / (lx1 - lx0) * (width - left - right);
    };
    auto sy = [&](double v) {
        return height - bottom - (std::log10(v) - ly0) / (ly1 - ly0) * (height - top - bottom);
    };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(width) +
                      "\" height=\"" + fmt2(height) + "\" font-family=\"sans-serif\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt2(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
           title + "</text>\n";

    // decade grid and tick labels
    for (double e = lx0; e <= lx1; e += 1.0) {
        const double x = sx(std::pow(10.0, e));
        svg += "<line x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(top) + "\" x2=\"" + fmt2(x) +
               "\" y2=\"" + fmt2(height - bottom) + "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(height - bottom + 18) +
               "\" text-anchor=\"middle\" font-size=\"11\">1e" + std::to_string(int(e)) +
               "</text>\n";
    }
    for (double e = ly0; e <= ly1; e += 1.0) {
        const double y = sy(std::pow(10.0, e));
        svg += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(y) + "\" x2=\"" +
               fmt2(width - right) + "\" y2=\"" + fmt2(y) + "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + fmt2(left - 8) + "\" y=\"" + fmt2(y + 4) +
               "\" text-anchor=\"end\" font-size=\"11\">1e" + std::to_string(int(e)) + "</text>\n";
    }
    svg += "<text x=\"" + fmt2(width / 2) + "\" y=\"" + fmt2(height - 16) +
           "\" text-anchor=\"middle\" font-size=\"13\">data volume (bytes)</text>\n";
    svg += "<text x=\"20\" y=\"" + fmt2(height / 2) +
           "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 " +
           fmt2(height / 2) + ")\">" + y_label + "</text>\n";

    for (size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string path;
        for (const auto& [x, y] : series[i].points)
            path += (path.empty() ? "M" : " L") + fmt2(sx(x)) + " " + fmt2(sy(y));
        if (!path.empty())
            svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-width=\"2\"/>\n";
        for (const auto& [x, y] : series[i].points)
            svg += "<circle cx=\"" + fmt2(sx(x)) + "\" cy=\"" + fmt2(sy(y)) +
                   "\" r=\"3\" fill=\"" + color + "\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(i);
        svg += "<line x1=\"" + fmt2(width - right - 140) + "\" y1=\"" + fmt2(ly) + "\" x2=\"" +
               fmt2(width - right - 118) + "\" y2=\"" + fmt2(ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt2(width - right - 112) + "\" y=\"" + fmt2(ly + 4) +
               "\" font-size=\"12\">" + series[i].label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::vector<Series> collect_series(const ComparisonTable& table, bool energy) {
    std::vector<Series> series;
    for (const auto& row : table.rows) {
        Series s;
        s.label = to_string(row.mode);
        for (const auto& b : row.buckets) {
            if (b.requests == b.infeasible) continue; // no feasible traffic
            const double v = energy ? b.total_energy_j : b.mean_delay_s;
            if (v > 0.0) s.points.emplace_back(bucket_mid(b), v);
        }
        series.push_back(std::move(s));
    }
    return series;
}

} // namespace

std::string delay_chart_svg(const ComparisonTable& table) {
    return chart_svg("Transmission delay vs data volume", "mean delay (s)",
                     collect_series(table, false));
}

std::string energy_chart_svg(const ComparisonTable& table) {
    return chart_svg("Energy consumption vs data volume", "total energy (J)",
                     collect_series(table, true));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace clpwan
