#pragma once

#include <string>

#include <Eigen/Dense>

namespace phipp::datasets {

/// Embedded daily closing prices of two automotive stocks, first half of
/// 2010, most recent first. Returns CSV with header date,renault,peugeot.
const std::string& stock_prices_csv();

/// The two price columns of the table above, in table order.
Eigen::MatrixXd stock_prices();

}  // namespace phipp::datasets
