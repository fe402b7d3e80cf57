#pragma once

#include <Eigen/Dense>
#include <string>

namespace pddcov {

// Plain numeric CSV: one row per line, comma separated, no header.
// Values are written with 17 significant digits so read/write round-trips
// reproduce doubles exactly.
Eigen::MatrixXd read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m);

// In-memory variants used by tests and the CLI.
Eigen::MatrixXd parse_csv_matrix(const std::string& text);
std::string format_csv_matrix(const Eigen::MatrixXd& m);

}  // namespace pddcov
