#include "tvgl/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tvgl/errors.hpp"

namespace tvgl {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("non-numeric cell '" + s + "' at " + where);
    }
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!trim(line).empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prefer the shortest representation that round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

DataTable read_data_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.size() < 2) throw ValidationError("data file needs a header and at least one row: " + path);

    DataTable table;
    table.names = split_csv(lines[0]);
    const int p = static_cast<int>(table.names.size());
    const int T = static_cast<int>(lines.size()) - 1;
    table.X.resize(p, T);
    for (int t = 0; t < T; ++t) {
        const auto cells = split_csv(lines[t + 1]);
        if (static_cast<int>(cells.size()) != p) {
            throw ValidationError("ragged row " + std::to_string(t + 1) + " in " + path +
                                  ": expected " + std::to_string(p) + " cells, got " +
                                  std::to_string(cells.size()));
        }
        for (int i = 0; i < p; ++i) {
            table.X(i, t) = parse_double(
                cells[i], "row " + std::to_string(t + 1) + ", column " + std::to_string(i + 1));
        }
    }
    return table;
}

Matrix read_mask_csv(const std::string& path, int p, int T) {
    const auto lines = read_lines(path);
    const bool has_header = [&] {
        const auto cells = split_csv(lines[0]);
        for (const auto& c : cells) {
            if (c != "0" && c != "1") return true;
        }
        return false;
    }();
    const int offset = has_header ? 1 : 0;
    if (static_cast<int>(lines.size()) - offset != T) {
        throw ValidationError("mask shape mismatch: expected " + std::to_string(T) +
                              " rows, got " + std::to_string(lines.size() - offset));
    }
    Matrix M(p, T);
    for (int t = 0; t < T; ++t) {
        const auto cells = split_csv(lines[t + offset]);
        if (static_cast<int>(cells.size()) != p) {
            throw ValidationError("mask shape mismatch at row " + std::to_string(t + 1) +
                                  ": expected " + std::to_string(p) + " cells, got " +
                                  std::to_string(cells.size()));
        }
        for (int i = 0; i < p; ++i) {
            if (cells[i] == "0") {
                M(i, t) = 0.0;
            } else if (cells[i] == "1") {
                M(i, t) = 1.0;
            } else {
                throw ValidationError("mask value '" + cells[i] + "' outside {0,1} at row " +
                                      std::to_string(t + 1) + ", column " + std::to_string(i + 1));
            }
        }
    }
    return M;
}

IngestResult ingest_data(const std::string& data_path,
                         const std::optional<std::string>& mask_path) {
    DataTable table = read_data_csv(data_path);
    const int p = static_cast<int>(table.X.rows());
    const int T = static_cast<int>(table.X.cols());
    IngestResult out;
    out.names = std::move(table.names);
    out.X = std::move(table.X);
    out.M = mask_path ? read_mask_csv(*mask_path, p, T) : Matrix::Ones(p, T);
    out.X = out.M.cwiseProduct(out.X);
    return out;
}

void write_data_csv(const std::string& path, const std::vector<std::string>& names,
                    const Matrix& X) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << (i ? "," : "") << names[i];
    }
    out << "\n";
    for (Eigen::Index t = 0; t < X.cols(); ++t) {
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            out << (i ? "," : "") << format_double(X(i, t));
        }
        out << "\n";
    }
}

void write_mask_csv(const std::string& path, const Matrix& M) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        out << (i ? "," : "") << "n" << i;
    }
    out << "\n";
    for (Eigen::Index t = 0; t < M.cols(); ++t) {
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            out << (i ? "," : "") << (M(i, t) != 0.0 ? 1 : 0);
        }
        out << "\n";
    }
}

void write_edge_list(const std::string& path, const std::vector<EdgeWeights>& frames,
                     double edge_tol) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "frame,i,j,weight\n";
    for (std::size_t n = 0; n < frames.size(); ++n) {
        const EdgeWeights& w = frames[n];
        int e = 0;
        for (int i = 0; i < w.p; ++i) {
            for (int j = i + 1; j < w.p; ++j, ++e) {
                if (w.values[e] > edge_tol) {
                    out << (n + 1) << ',' << i << ',' << j << ','
                        << format_double(w.values[e]) << "\n";
                }
            }
        }
    }
}

std::vector<EdgeWeights> read_edge_list(const std::string& path, int p) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw ValidationError("empty edge list: " + path);

    struct Row {
        int frame, i, j;
        double w;
    };
    std::vector<Row> rows;
    int max_node = -1;
    int max_frame = 0;
    for (std::size_t r = 1; r <= lines.size(); ++r) {
        if (r == 1 && split_csv(lines[0])[0] == "frame") continue;
        const auto cells = split_csv(lines[r - 1]);
        if (cells.size() != 4) {
            throw ValidationError("edge list row " + std::to_string(r) + " needs 4 cells");
        }
        Row row;
        row.frame = static_cast<int>(parse_double(cells[0], "edge row " + std::to_string(r)));
        row.i = static_cast<int>(parse_double(cells[1], "edge row " + std::to_string(r)));
        row.j = static_cast<int>(parse_double(cells[2], "edge row " + std::to_string(r)));
        row.w = parse_double(cells[3], "edge row " + std::to_string(r));
        if (row.frame < 1 || row.i < 0 || row.j <= row.i || row.w < 0.0) {
            throw ValidationError("invalid edge at row " + std::to_string(r) + " of " + path);
        }
        max_node = std::max({max_node, row.i, row.j});
        max_frame = std::max(max_frame, row.frame);
        rows.push_back(row);
    }
    if (p <= 0) p = max_node + 1;
    if (max_node >= p) {
        throw ValidationError("edge list references node " + std::to_string(max_node) +
                              " but p = " + std::to_string(p));
    }

    std::vector<EdgeWeights> frames(max_frame, EdgeWeights::zeros(p));
    for (const Row& row : rows) {
        frames[row.frame - 1](row.i, row.j) = row.w;
    }
    return frames;
}

IntVector read_labels(const std::string& path) {
    const auto lines = read_lines(path);
    IntVector labels(lines.size());
    for (std::size_t r = 0; r < lines.size(); ++r) {
        labels[static_cast<Eigen::Index>(r)] = static_cast<int>(
            parse_double(trim(lines[r]), "labels row " + std::to_string(r + 1)));
    }
    return labels;
}

void write_labels(const std::string& path, const IntVector& labels) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    for (Eigen::Index i = 0; i < labels.size(); ++i) out << labels[i] << "\n";
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) +
                                  " is not 'key = value'");
        }
        cfg.values_[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto s = values_.find(section);
    return s != values_.end() && s->second.count(key) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
    const auto s = values_.find(section);
    if (s == values_.end() || !s->second.count(key)) {
        throw ValidationError("config is missing [" + section + "] " + key);
    }
    return s->second.at(key);
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    return parse_double(get_string(section, key), "[" + section + "] " + key);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key) const {
    const double v = get_double(section, key);
    const long n = static_cast<long>(v);
    if (static_cast<double>(n) != v) {
        throw ValidationError("config [" + section + "] " + key + " must be an integer");
    }
    return n;
}

long Config::get_int(const std::string& section, const std::string& key, long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

}  // namespace tvgl
