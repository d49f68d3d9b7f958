#include "phipp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "phipp/errors.hpp"

namespace phipp {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        // trim surrounding whitespace and CR
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool parse_number(const std::string& s, double& value) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto res = std::from_chars(begin, end, value);
    return res.ec == std::errc() && res.ptr == end;
}

}  // namespace

CsvTable read_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.find_first_not_of(" \t\r\n") == std::string::npos)
        throw IngestError("csv: empty input, expected a header at row 1");
    const std::vector<std::string> header = split_line(line);
    const std::size_t ncols = header.size();

    // Column types come from the first data row: numeric columns must then
    // parse in every row, label columns (dates etc.) are skipped wholesale.
    std::vector<std::vector<double>> values(ncols);
    std::vector<int> numeric(ncols, -1);  // -1 undecided, 0 label, 1 numeric
    std::size_t row = 1;
    std::size_t nrows = 0;
    while (std::getline(is, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != ncols)
            throw IngestError("csv: row " + std::to_string(row) + " has " +
                              std::to_string(cells.size()) + " cells, header has " +
                              std::to_string(ncols));
        for (std::size_t j = 0; j < ncols; ++j) {
            double v = 0.0;
            const bool ok = parse_number(cells[j], v);
            if (numeric[j] == -1) numeric[j] = ok ? 1 : 0;
            if (numeric[j] == 1) {
                if (!ok)
                    throw IngestError("csv: cell at row " + std::to_string(row) +
                                      ", column '" + header[j] + "' is not numeric: '" +
                                      cells[j] + "'");
                values[j].push_back(v);
            }
        }
        ++nrows;
    }
    if (nrows == 0) throw IngestError("csv: no data rows after the header (row 1)");

    CsvTable table;
    for (std::size_t j = 0; j < ncols; ++j)
        if (numeric[j] == 1) table.column_names.push_back(header[j]);
    if (table.column_names.empty())
        throw IngestError("csv: no numeric column found (checked " + std::to_string(ncols) +
                          " columns)");
    table.data.resize(nrows, table.column_names.size());
    std::size_t out = 0;
    for (std::size_t j = 0; j < ncols; ++j) {
        if (numeric[j] != 1) continue;
        for (std::size_t i = 0; i < nrows; ++i) table.data(i, out) = values[j][i];
        ++out;
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    return read_csv(read_file(path));
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IngestError("cannot open '" + path + "' for writing");
    os << content;
}

std::string read_file(const std::string& path) {
    std::ifstream isf(path, std::ios::binary);
    if (!isf) throw IngestError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << isf.rdbuf();
    return buf.str();
}

}  // namespace phipp
