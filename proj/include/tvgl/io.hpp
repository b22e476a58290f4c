#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tvgl/types.hpp"

namespace tvgl {

/// Data matrix plus node names. Files store one time sample per row with a
/// leading header row of node names; in memory columns are samples (p x T).
struct DataTable {
    std::vector<std::string> names;
    Matrix X;
};

/// Parse a data CSV. Throws ValidationError on ragged rows or non-numeric
/// cells, naming the offending row and column.
DataTable read_data_csv(const std::string& path);

/// Parse a mask CSV of the same shape as the data file; entries must be 0 or 1.
Matrix read_mask_csv(const std::string& path, int p, int T);

/// Read data and optional mask; absent mask means fully observed. Unobserved
/// entries of the returned matrix are zeroed.
struct IngestResult {
    std::vector<std::string> names;
    Matrix X;
    Matrix M;
};
IngestResult ingest_data(const std::string& data_path,
                         const std::optional<std::string>& mask_path);

void write_data_csv(const std::string& path, const std::vector<std::string>& names,
                    const Matrix& X);
void write_mask_csv(const std::string& path, const Matrix& M);

/// Per-frame edge lists in "frame,i,j,weight" rows (i < j, 0-based nodes,
/// 1-based frames); only weights above edge_tol are written.
void write_edge_list(const std::string& path, const std::vector<EdgeWeights>& frames,
                     double edge_tol);

/// Read an edge list back into per-frame weight vectors. p may be given
/// explicitly or inferred as max node index + 1 across the file.
std::vector<EdgeWeights> read_edge_list(const std::string& path, int p = 0);

/// One integer label per line.
IntVector read_labels(const std::string& path);
void write_labels(const std::string& path, const IntVector& labels);

/// Flat "key = value" configuration with [section] headers; '#' starts a
/// comment. Lookups are section-scoped; every access validates convertibility.
class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_int(const std::string& section, const std::string& key) const;
    long get_int(const std::string& section, const std::string& key, long fallback) const;

  private:
    std::map<std::string, std::map<std::string, std::string>> values_;
};

/// Shortest lossless decimal form used across all CSV emission.
std::string format_double(double v);

}  // namespace tvgl
