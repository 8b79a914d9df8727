#include "ddwave/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <locale>
#include <sstream>

#include "ddwave/params.hpp"

namespace ddw {

namespace {

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, mode | std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << value;
    return os.str();
}

std::string csv_escape(const std::string& field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows)
{
    auto out = open_output(path);
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << csv_escape(header[k]);
    out << "\r\n";
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw ValidationError("write_csv: row width does not match the header");
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_number(row[k]);
        out << "\r\n";
    }
}

void write_series_csv(const std::filesystem::path& path, const std::vector<NormPoint>& series)
{
    std::vector<std::vector<double>> rows;
    rows.reserve(series.size());
    for (const auto& pt : series) rows.push_back({pt.t, pt.norm});
    write_csv(path, {"t", "norm"}, rows);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc)
{
    auto out = open_output(path);
    out << doc.dump(2) << "\n";
}

std::string loglog_svg(const std::string& title, const std::vector<PlotSeries>& series)
{
    constexpr double width = 640, height = 440, left = 70, right = 20, top = 40, bottom = 50;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (const auto& pt : s.points) {
            if (!(pt.t > 0.0 && pt.norm > 0.0)) continue;
            xmin = std::min(xmin, std::log10(pt.t));
            xmax = std::max(xmax, std::log10(pt.t));
            ymin = std::min(ymin, std::log10(pt.norm));
            ymax = std::max(ymax, std::log10(pt.norm));
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax - xmin < 1e-12) xmax = xmin + 1;
    if (ymax - ymin < 1e-12) ymax = ymin + 1;
    const auto px = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * (width - left - right); };
    const auto py = [&](double ly) { return height - bottom - (ly - ymin) / (ymax - ymin) * (height - top - bottom); };

    static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << title << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right << "\" height=\""
       << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">log10 t</text>\n";
    os << "<text x=\"16\" y=\"" << height / 2 << "\" transform=\"rotate(-90 16 " << height / 2
       << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">log10 norm</text>\n";
    for (int k = 0; k <= 4; ++k) {
        const double lx = xmin + (xmax - xmin) * k / 4.0, ly = ymin + (ymax - ymin) * k / 4.0;
        os << "<text x=\"" << px(lx) << "\" y=\"" << height - bottom + 16
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << lx << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << py(ly) + 3
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << ly << "</text>\n";
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = colors[s % 5];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& pt : series[s].points) {
            if (!(pt.t > 0.0 && pt.norm > 0.0)) continue;
            os << px(std::log10(pt.t)) << ',' << py(std::log10(pt.norm)) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << left + 10 << "\" y=\"" << top + 16 + 14 * static_cast<double>(s) << "\" fill=\"" << color
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_loglog_svg(const std::filesystem::path& path, const std::string& title,
                      const std::vector<PlotSeries>& series)
{
    auto out = open_output(path);
    out << loglog_svg(title, series);
}

nlohmann::json to_json(const DecayFit& fit)
{
    return {{"slope", fit.slope},
            {"stderr", fit.std_error},
            {"window", {fit.t_min, fit.t_max}},
            {"n_points", fit.n_points}};
}

nlohmann::json to_json(const std::vector<NormPoint>& series)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& pt : series) arr.push_back({pt.t, pt.norm});
    return arr;
}

}  // namespace ddw
