#pragma once

#include <Eigen/Dense>
#include <vector>

#include "perifsi/shell.hpp"

namespace perifsi {

// Normalized weights of the smooth bump kernel of half-width `width` sampled at
// offsets j * spacing, j = -J..J. Width below one spacing gives the identity.
std::vector<double> bump_weights(double width, double spacing);

// Circular convolution of a periodic path with the bump kernel. Rows are the
// N distinct samples of one period (the duplicate endpoint excluded), columns
// are independent components.
Eigen::MatrixXd mollify(const Eigen::MatrixXd& path, double width, double spacing);
std::vector<double> mollify(const std::vector<double>& signal, double width, double spacing);

// Spatial variant: periodic convolution in theta (angular half-width `width`).
// Clamped directions carry no convolution structure and are left untouched.
ShellField mollify(const ShellField& field, double width);

}  // namespace perifsi
