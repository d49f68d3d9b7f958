#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace phipp {

struct CsvTable {
    std::vector<std::string> column_names;  // numeric columns only
    Eigen::MatrixXd data;
};

/// Parses a comma-separated table with a header row. Columns that fail to
/// parse as numbers in every row (dates, labels) are skipped; errors name
/// the offending row and column.
CsvTable read_csv(const std::string& text);
CsvTable read_csv_file(const std::string& path);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace phipp
