#include "mixedgraph/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mixedgraph/errors.hpp"

namespace mixedgraph {

namespace {

bool is_integer_valued(double v) {
    return std::isfinite(v) && v == std::floor(v);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, int row, int col) {
    const std::string s = trim(raw);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("non-numeric cell '" + s + "' at row " +
                         std::to_string(row) + ", column " + std::to_string(col));
    }
    return v;
}

}  // namespace

VariableKind VariableKind::ordinal(std::vector<double> levels) {
    if (levels.size() < 2) {
        throw ValidationError("ordinal kind needs at least 2 levels");
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!std::isfinite(levels[i]) ||
            (i > 0 && !(levels[i] > levels[i - 1]))) {
            throw ValidationError("ordinal levels must be finite and strictly increasing");
        }
    }
    VariableKind k;
    k.tag = Tag::Ordinal;
    k.levels = std::move(levels);
    return k;
}

int MixedDataset::d1() const {
    return static_cast<int>(
        std::count_if(kinds.begin(), kinds.end(),
                      [](const VariableKind& k) { return k.is_ordinal(); }));
}

int MixedDataset::d2() const { return d() - d1(); }

void MixedDataset::validate() const {
    if (n() < 2 || d() < 2) {
        throw ValidationError("dataset needs n >= 2 and d >= 2");
    }
    if (static_cast<int>(kinds.size()) != d() ||
        static_cast<int>(names.size()) != d()) {
        throw ValidationError("kinds/names length must match column count");
    }
    for (int j = 0; j < d(); ++j) {
        const auto col = values.col(j);
        double first = col[0];
        bool constant = true;
        for (int i = 0; i < n(); ++i) {
            if (!std::isfinite(col[i])) {
                throw ValidationError("non-finite value in column " + names[j]);
            }
            if (col[i] != first) constant = false;
            if (kinds[j].is_ordinal() &&
                !std::binary_search(kinds[j].levels.begin(),
                                    kinds[j].levels.end(), col[i])) {
                throw ValidationError("value " + format_double(col[i]) +
                                      " outside declared levels of column " +
                                      names[j]);
            }
        }
        if (constant) {
            throw ValidationError("degenerate constant column " + names[j]);
        }
    }
}

std::vector<VariableKind> infer_variable_kinds(const Eigen::MatrixXd& values,
                                               int max_levels) {
    std::vector<VariableKind> kinds;
    kinds.reserve(values.cols());
    for (int j = 0; j < values.cols(); ++j) {
        std::set<double> distinct;
        bool all_integer = true;
        for (int i = 0; i < values.rows(); ++i) {
            double v = values(i, j);
            if (!std::isfinite(v)) {
                throw ValidationError("non-finite value in column " + std::to_string(j));
            }
            all_integer = all_integer && is_integer_valued(v);
            distinct.insert(v);
        }
        if (distinct.size() < 2) {
            throw ValidationError("degenerate constant column " + std::to_string(j));
        }
        if (all_integer && static_cast<int>(distinct.size()) <= max_levels) {
            kinds.push_back(VariableKind::ordinal(
                std::vector<double>(distinct.begin(), distinct.end())));
        } else {
            kinds.push_back(VariableKind::continuous());
        }
    }
    return kinds;
}

MixedDataset ingest_csv(const std::string& path,
                        std::optional<std::vector<VariableKind>> kind_spec,
                        int max_levels) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file " + path);
    std::vector<std::string> names;
    for (auto& h : split_line(line)) names.push_back(trim(h));
    const int d = static_cast<int>(names.size());
    if (d < 1) throw ParseError("missing header row in " + path);

    std::vector<std::vector<double>> rows;
    int row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (static_cast<int>(cells.size()) != d) {
            throw ParseError("row " + std::to_string(row_no) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(d));
        }
        std::vector<double> row(d);
        for (int j = 0; j < d; ++j) row[j] = parse_cell(cells[j], row_no, j + 1);
        rows.push_back(std::move(row));
    }

    MixedDataset data;
    data.names = std::move(names);
    data.values.resize(static_cast<int>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < d; ++j) data.values(static_cast<int>(i), j) = rows[i][j];
    }
    data.kinds = kind_spec ? std::move(*kind_spec)
                           : infer_variable_kinds(data.values, max_levels);
    data.validate();
    return data;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

void write_csv(const MixedDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    for (int j = 0; j < data.d(); ++j) {
        out << data.names[j] << (j + 1 == data.d() ? "\n" : ",");
    }
    for (int i = 0; i < data.n(); ++i) {
        for (int j = 0; j < data.d(); ++j) {
            out << format_double(data.values(i, j)) << (j + 1 == data.d() ? "\n" : ",");
        }
    }
}

void write_kinds_sidecar(const MixedDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    for (int j = 0; j < data.d(); ++j) {
        out << data.names[j];
        if (data.kinds[j].is_ordinal()) {
            out << ",ordinal";
            for (double lv : data.kinds[j].levels) out << "," << format_double(lv);
        } else {
            out << ",continuous";
        }
        out << "\n";
    }
}

std::vector<VariableKind> read_kinds_sidecar(const std::string& path,
                                             const std::vector<std::string>& names) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<VariableKind> kinds(names.size());
    std::vector<bool> seen(names.size(), false);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (cells.size() < 2) {
            throw ParseError("sidecar line " + std::to_string(line_no) +
                             ": expected name,kind[,levels...]");
        }
        const std::string name = trim(cells[0]);
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) {
            throw ValidationError("sidecar names unknown column " + name);
        }
        auto idx = static_cast<std::size_t>(it - names.begin());
        const std::string kind = trim(cells[1]);
        if (kind == "continuous") {
            kinds[idx] = VariableKind::continuous();
        } else if (kind == "ordinal") {
            std::vector<double> levels;
            for (std::size_t c = 2; c < cells.size(); ++c) {
                levels.push_back(parse_cell(cells[c], line_no, static_cast<int>(c + 1)));
            }
            kinds[idx] = VariableKind::ordinal(std::move(levels));
        } else {
            throw ParseError("sidecar line " + std::to_string(line_no) +
                             ": unknown kind '" + kind + "'");
        }
        seen[idx] = true;
    }
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (!seen[j]) throw ValidationError("sidecar missing column " + names[j]);
    }
    return kinds;
}

}  // namespace mixedgraph
