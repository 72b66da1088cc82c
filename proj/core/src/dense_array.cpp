// SPDX-License-Identifier: Apache-2.0

#include "moa/dense_array.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "moa/error.hpp"
#include "moa/instrumentation.hpp"

namespace moa {

namespace {

std::shared_ptr<const std::vector<double>> adopt(std::vector<double> data) {
  instrumentation::count_array_allocation();
  return std::make_shared<const std::vector<double>>(std::move(data));
}

}  // namespace

DenseArray::DenseArray() : shape_{0}, data_(adopt({})) {}

DenseArray::DenseArray(Shape shape, std::vector<double> data) : shape_(std::move(shape)) {
  const Extent n = pi(shape_);
  if (static_cast<Extent>(data.size()) != n) {
    throw Error(ErrorKind::kShape, "array of shape " + to_string(shape_) + " needs " +
                                       std::to_string(n) + " elements, got " +
                                       std::to_string(data.size()));
  }
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (!std::isfinite(data[k])) {
      throw Error(ErrorKind::kValue, "non-finite element at flat offset " + std::to_string(k));
    }
  }
  data_ = adopt(std::move(data));
}

DenseArray::DenseArray(Share, Shape shape, std::shared_ptr<const std::vector<double>> data)
    : shape_(std::move(shape)), data_(std::move(data)) {}

DenseArray DenseArray::scalar(double value) { return DenseArray(Shape{}, {value}); }

DenseArray DenseArray::iota(Shape shape, double start) {
  std::vector<double> data(static_cast<std::size_t>(pi(shape)));
  for (auto& d : data) d = start++;
  return DenseArray(std::move(shape), std::move(data));
}

double DenseArray::at(std::span<const Extent> index) const {
  return (*data_)[static_cast<std::size_t>(ravel_rowmajor(index, shape_))];
}

double DenseArray::flat(Extent offset) const {
  if (offset < 0 || offset >= size()) {
    throw Error(ErrorKind::kRange, "flat offset " + std::to_string(offset) + " outside [0, " +
                                       std::to_string(size()) + ")");
  }
  return (*data_)[static_cast<std::size_t>(offset)];
}

double DenseArray::value() const {
  if (rank() != 0) {
    throw Error(ErrorKind::kShape, "value() on array of shape " + to_string(shape_));
  }
  return (*data_)[0];
}

bool operator==(const DenseArray& a, const DenseArray& b) {
  return a.shape_ == b.shape_ && (a.data_ == b.data_ || *a.data_ == *b.data_);
}

DenseArray psi(const MultiIndex& i, const DenseArray& a) {
  check_index(i.components(), a.shape());
  if (i.empty()) return a;
  const Shape rest = a.shape().slice(i.size(), a.rank());
  const Extent slab = pi(rest);
  Extent start = 0;
  for (std::size_t k = 0; k < i.size(); ++k) start = start * a.shape()[k] + i[k];
  start *= slab;
  auto first = a.data().begin() + start;
  return DenseArray(rest, std::vector<double>(first, first + slab));
}

DenseArray flatten(const DenseArray& a) { return DenseArray(DenseArray::Share{}, Shape{a.size()}, a.data_); }

DenseArray reshape(const Shape& s, const DenseArray& a) {
  if (pi(s) != a.size()) {
    throw Error(ErrorKind::kShape, "cannot reshape " + to_string(a.shape()) + " (" +
                                       std::to_string(a.size()) + " elements) to " + to_string(s) +
                                       " (" + std::to_string(pi(s)) + " elements)");
  }
  return DenseArray(DenseArray::Share{}, s, a.data_);
}

double max_abs_diff(const DenseArray& a, const DenseArray& b) {
  if (a.shape() != b.shape()) {
    throw Error(ErrorKind::kShape,
                "comparing shapes " + to_string(a.shape()) + " and " + to_string(b.shape()));
  }
  double worst = 0.0;
  for (Extent k = 0; k < a.size(); ++k) {
    worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
  }
  return worst;
}

std::string format_scalar(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string array_to_json(const DenseArray& a) {
  std::string out = "{\"shape\":[";
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (k) out += ',';
    out += std::to_string(a.shape()[k]);
  }
  out += "],\"data\":[";
  for (Extent k = 0; k < a.size(); ++k) {
    if (k) out += ',';
    out += format_scalar(a.data()[k]);
  }
  out += "]}";
  return out;
}

DenseArray array_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("array JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("shape") || !doc.contains("data") ||
      !doc["shape"].is_array() || !doc["data"].is_array()) {
    throw Error(ErrorKind::kParse, "array JSON must be an object with \"shape\" and \"data\" arrays");
  }
  std::vector<Extent> extents;
  for (const auto& e : doc["shape"]) {
    if (!e.is_number_integer()) throw Error(ErrorKind::kParse, "array JSON: shape entries must be integers");
    extents.push_back(e.get<Extent>());
  }
  std::vector<double> data;
  for (const auto& d : doc["data"]) {
    if (!d.is_number()) throw Error(ErrorKind::kParse, "array JSON: data entries must be numbers");
    data.push_back(d.get<double>());
  }
  return DenseArray(Shape(std::move(extents)), std::move(data));
}

DenseArray load_array(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open array file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return array_from_json(ss.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

}  // namespace moa
