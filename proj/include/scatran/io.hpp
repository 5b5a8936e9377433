#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "scatran/cases.hpp"
#include "scatran/errors.hpp"
#include "scatran/field.hpp"
#include "scatran/mesh.hpp"

namespace scatran {

/// Shortest deterministic round-trip formatting for CSV/VTK payloads.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << body;
}

inline std::string csv_table(const std::vector<std::string>& header,
                             const std::vector<std::vector<double>>& rows) {
    std::string s;
    for (std::size_t c = 0; c < header.size(); ++c) {
        s += header[c];
        s += (c + 1 < header.size()) ? ',' : '\n';
    }
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            s += format_double(row[c]);
            s += (c + 1 < row.size()) ? ',' : '\n';
        }
    }
    return s;
}

inline std::string report_csv(const ConvergenceReport& rep) {
    std::string s = "case,variant,epsilon,delta,n,l1_error,order\n";
    for (const auto& r : rep.rows) {
        s += rep.case_id + ',' + rep.variant_id + ',' + format_double(rep.epsilon) + ',' +
             format_double(rep.delta) + ',' + std::to_string(r.n) + ',' + format_double(r.l1) +
             ',' + (std::isnan(r.order) ? std::string("-") : format_double(r.order)) + '\n';
    }
    return s;
}

/// Aligned plain-text table in the layout of the convergence tables.
inline std::string report_table(const ConvergenceReport& rep) {
    char line[128];
    std::string s = rep.case_id + "  " + rep.variant_id;
    if (rep.epsilon > 0.0) s += "  eps=" + format_double(rep.epsilon);
    if (rep.delta > 0.0) s += "  delta=" + format_double(rep.delta);
    s += "\n  N      L1-error    order\n";
    for (const auto& r : rep.rows) {
        if (std::isnan(r.order))
            std::snprintf(line, sizeof(line), "%5d   %.2e    -\n", r.n, r.l1);
        else
            std::snprintf(line, sizeof(line), "%5d   %.2e   %.2f\n", r.n, r.l1, r.order);
        s += line;
    }
    return s;
}

inline std::string mesh_csv(const Mesh1D& mesh) {
    std::string s = "index,face,center,spacing\n";
    for (int i = 0; i < mesh.cells(); ++i)
        s += std::to_string(i) + ',' + format_double(mesh.face(i)) + ',' +
             format_double(mesh.center(i)) + ',' + format_double(mesh.spacing(i)) + '\n';
    s += std::to_string(mesh.cells()) + ',' + format_double(mesh.face(mesh.cells())) + ",,\n";
    return s;
}

/// Legacy ASCII RECTILINEAR_GRID snapshot: cell-center coordinates as points,
/// one SCALARS block per field. x maps to X, z to Y.
inline std::string vtk_rectilinear(const std::string& title, const std::vector<double>& xs,
                                   const std::vector<double>& zs,
                                   const std::vector<std::pair<std::string, const Field*>>& fields) {
    const std::size_t nx = xs.size(), nz = zs.size();
    std::string s = "# vtk DataFile Version 3.0\n" + title + "\nASCII\nDATASET RECTILINEAR_GRID\n";
    s += "DIMENSIONS " + std::to_string(nx) + " " + std::to_string(nz) + " 1\n";
    s += "X_COORDINATES " + std::to_string(nx) + " double\n";
    for (std::size_t i = 0; i < nx; ++i) {
        s += format_double(xs[i]);
        s += (i + 1 < nx) ? ' ' : '\n';
    }
    s += "Y_COORDINATES " + std::to_string(nz) + " double\n";
    for (std::size_t k = 0; k < nz; ++k) {
        s += format_double(zs[k]);
        s += (k + 1 < nz) ? ' ' : '\n';
    }
    s += "Z_COORDINATES 1 double\n0\n";
    s += "POINT_DATA " + std::to_string(nx * nz) + "\n";
    for (const auto& [name, f] : fields) {
        s += "SCALARS " + name + " double 1\nLOOKUP_TABLE default\n";
        for (int k = 0; k < static_cast<int>(nz); ++k)
            for (int i = 0; i < static_cast<int>(nx); ++i) s += format_double((*f)(i, k)) + "\n";
    }
    return s;
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Inventory of one run: every emitted file with size and checksum, plus
/// wall-clock and step accounting. Timestamps live only here.
class RunManifest {
  public:
    explicit RunManifest(std::string out_dir) : dir_(std::move(out_dir)) {
        std::filesystem::create_directories(dir_);
    }

    const std::string& dir() const { return dir_; }

    std::string emit(const std::string& name, const std::string& body) {
        const std::string path = dir_ + "/" + name;
        write_text_file(path, body);
        entries_.push_back({name, body.size(), fnv1a64(body)});
        return path;
    }

    void set_config_echo(std::string json) { config_echo_ = std::move(json); }
    void set_accounting(double wall_seconds, long steps) {
        wall_seconds_ = wall_seconds;
        steps_ = steps;
    }

    void write() const {
        std::string s = "{\n  \"files\": [\n";
        for (std::size_t j = 0; j < entries_.size(); ++j) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%016llx",
                          static_cast<unsigned long long>(entries_[j].fnv64));
            s += "    {\"name\": \"" + entries_[j].name +
                 "\", \"bytes\": " + std::to_string(entries_[j].bytes) + ", \"fnv1a64\": \"" + buf +
                 "\"}";
            s += (j + 1 < entries_.size()) ? ",\n" : "\n";
        }
        s += "  ],\n";
        s += "  \"wall_seconds\": " + format_double(wall_seconds_) + ",\n";
        s += "  \"steps\": " + std::to_string(steps_) + ",\n";
        s += "  \"written_unix_time\": " + std::to_string(static_cast<long>(std::time(nullptr)));
        if (!config_echo_.empty()) s += ",\n  \"config\": " + config_echo_;
        s += "\n}\n";
        write_text_file(dir_ + "/manifest.json", s);
    }

  private:
    struct Entry {
        std::string name;
        std::size_t bytes;
        std::uint64_t fnv64;
    };
    std::string dir_;
    std::vector<Entry> entries_;
    std::string config_echo_;
    double wall_seconds_ = 0.0;
    long steps_ = 0;
};

inline std::string lattice_csv(const std::vector<double>& lattice, int nx, int nz) {
    std::string s = "lattice_nx,lattice_nz\n" + std::to_string(nx) + ',' + std::to_string(nz) + '\n';
    for (int b = 0; b < nz; ++b) {
        for (int a = 0; a < nx; ++a) {
            s += format_double(lattice[static_cast<std::size_t>(b) * nx + a]);
            s += (a + 1 < nx) ? ',' : '\n';
        }
    }
    return s;
}

inline std::vector<double> load_lattice_csv(const std::string& path, int& nx, int& nz) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open disturbance file: " + path);
    std::string line;
    std::getline(in, line); // header
    char comma = 0;
    in >> nx >> comma >> nz;
    std::getline(in, line);
    std::vector<double> lat(static_cast<std::size_t>(nx) * nz);
    for (int b = 0; b < nz; ++b) {
        if (!std::getline(in, line)) throw ConfigError("disturbance file truncated: " + path);
        std::size_t pos = 0;
        for (int a = 0; a < nx; ++a) {
            std::size_t next = line.find(',', pos);
            lat[static_cast<std::size_t>(b) * nx + a] = std::stod(line.substr(pos, next - pos));
            pos = (next == std::string::npos) ? line.size() : next + 1;
        }
    }
    return lat;
}

} // namespace scatran
