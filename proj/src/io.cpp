#include "wishprod/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace wishprod {

namespace fs = std::filesystem;

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path dir = path.parent_path();
    if (dir.empty()) {
        dir = ".";
    }
    fs::create_directories(dir);
    const fs::path tmp = path.string() + ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            fail("IoError", "cannot open " + tmp.string() + " for writing");
        }
        out << content;
        if (!out.flush()) {
            fail("IoError", "write to " + tmp.string() + " failed");
        }
    }
    fs::rename(tmp, path);
}

std::string matrix_to_csv(const Matrix& m, std::optional<int> k, std::optional<int> r) {
    std::ostringstream out;
    if (k.has_value() || r.has_value()) {
        out << "# k=" << k.value_or(static_cast<int>(m.rows()))
            << ",r=" << r.value_or(static_cast<int>(m.cols())) << "\n";
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ",";
            }
            out << format_full(m(i, j));
        }
        out << "\n";
    }
    return out.str();
}

CsvMatrix matrix_from_csv(const std::string& text) {
    CsvMatrix result;
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        if (line[0] == '#') {
            int kv = 0, rv = 0;
            if (std::sscanf(line.c_str(), "# k=%d,r=%d", &kv, &rv) == 2) {
                result.k = kv;
                result.r = rv;
            }
            continue;
        }
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                fail("BadFormat", "unparsable CSV cell '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            fail("BadFormat", "ragged CSV row");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        fail("BadFormat", "CSV contains no data rows");
    }
    result.values.resize(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            result.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
        }
    }
    return result;
}

CsvMatrix read_matrix_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail("IoError", "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return matrix_from_csv(buf.str());
}

namespace {

std::string fmt_coord(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

std::string polyline(const std::vector<double>& grid, const std::vector<double>& density,
                     double x0, double x1, double y0, double y1, double gmin, double gmax,
                     double dmax) {
    std::ostringstream pts;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double px = x0 + (grid[i] - gmin) / (gmax - gmin) * (x1 - x0);
        const double py = y1 - density[i] / dmax * (y1 - y0);
        if (i > 0) {
            pts << " ";
        }
        pts << fmt_coord(px) << "," << fmt_coord(py);
    }
    return pts.str();
}

} // namespace

std::string kde_overlay_svg(const std::vector<double>& grid,
                            const std::vector<double>& kde_density,
                            const std::vector<double>& reference_density) {
    if (grid.size() < 2 || grid.size() != kde_density.size() ||
        grid.size() != reference_density.size()) {
        fail("BadFormat", "SVG overlay needs equal-length grid and densities");
    }
    const double width = 640, height = 440;
    const double x0 = 60, x1 = width - 20, y0 = 20, y1 = height - 40;
    const double gmin = grid.front(), gmax = grid.back();
    double dmax = 1e-12;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        dmax = std::max(dmax, std::max(kde_density[i], reference_density[i]));
    }
    dmax *= 1.05;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << x0 << "\" y1=\"" << y1 << "\" x2=\"" << x1 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";
    for (int t = static_cast<int>(std::ceil(gmin)); t <= static_cast<int>(std::floor(gmax));
         ++t) {
        const double px = x0 + (t - gmin) / (gmax - gmin) * (x1 - x0);
        svg << "<line x1=\"" << fmt_coord(px) << "\" y1=\"" << y1 << "\" x2=\""
            << fmt_coord(px) << "\" y2=\"" << y1 + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt_coord(px) << "\" y=\"" << y1 + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << t << "</text>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\""
        << polyline(grid, reference_density, x0, x1, y0, y1, gmin, gmax, dmax) << "\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"6,4\" points=\""
        << polyline(grid, kde_density, x0, x1, y0, y1, gmin, gmax, dmax) << "\"/>\n";
    svg << "<text x=\"" << x1 - 180 << "\" y=\"" << y0 + 14
        << "\" font-size=\"12\">solid: asymptotic density</text>\n";
    svg << "<text x=\"" << x1 - 180 << "\" y=\"" << y0 + 30
        << "\" font-size=\"12\">dashed: kernel estimate</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

} // namespace wishprod
