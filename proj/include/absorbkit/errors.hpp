#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace absorbkit {

//! Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class EmptyDataset : public Error {
public:
  EmptyDataset() : Error("dataset must have at least one row and one column") {}
};

class NonFiniteEntry : public Error {
public:
  NonFiniteEntry(std::size_t row, std::size_t col)
      : Error("non-finite entry at (" + std::to_string(row) + ", " + std::to_string(col) + ")"),
        row(row), col(col) {}
  std::size_t row;
  std::size_t col;
};

class KTooLarge : public Error {
public:
  KTooLarge(std::size_t k, std::size_t n)
      : Error("k=" + std::to_string(k) + " must satisfy 1 <= k <= n-1 for n=" + std::to_string(n)),
        k(k), n(n) {}
  std::size_t k;
  std::size_t n;
};

class IndexOutOfRange : public Error {
public:
  IndexOutOfRange(std::size_t index, std::size_t size)
      : Error("index " + std::to_string(index) + " out of range [0, " + std::to_string(size) + ")"),
        index(index), size(size) {}
  std::size_t index;
  std::size_t size;
};

class TooFewSamples : public Error {
public:
  TooFewSamples(std::size_t have, std::size_t need)
      : Error("need at least " + std::to_string(need) + " samples, have " + std::to_string(have)),
        have(have), need(need) {}
  std::size_t have;
  std::size_t need;
};

class DegenerateComponent : public Error {
public:
  explicit DegenerateComponent(std::size_t component)
      : Error("mixture component " + std::to_string(component) +
              " captures too few points and covariance regularization is zero"),
        component(component) {}
  std::size_t component;
};

class DimensionMismatch : public Error {
public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " + std::to_string(got)),
        expected(expected), got(got) {}
  std::size_t expected;
  std::size_t got;
};

class NonPositiveDensity : public Error {
public:
  explicit NonPositiveDensity(std::size_t index)
      : Error("density at sample " + std::to_string(index) + " is not a positive finite value"),
        index(index) {}
  std::size_t index;
};

class ZeroWeightNeighborhood : public Error {
public:
  explicit ZeroWeightNeighborhood(std::size_t index)
      : Error("all neighbor weights of sample " + std::to_string(index) + " are zero"),
        index(index) {}
  std::size_t index;
};

class NotPositiveDefinite : public Error {
public:
  NotPositiveDefinite() : Error("matrix is not symmetric positive-definite") {}
};

class RateOutOfRange : public Error {
public:
  explicit RateOutOfRange(double rate)
      : Error("contamination rate " + std::to_string(rate) + " selects no rows or is outside (0, 1)"),
        rate(rate) {}
  double rate;
};

class ConfigInvalid : public Error {
public:
  explicit ConfigInvalid(const std::string& what) : Error("invalid config: " + what) {}
};

class FileNotFound : public Error {
public:
  explicit FileNotFound(const std::string& path) : Error("cannot open file: " + path), path(path) {}
  std::string path;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, std::size_t column)
      : Error("parse error at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line(line), column(column) {}
  std::size_t line;
  std::size_t column;
};

class InconsistentWidth : public Error {
public:
  InconsistentWidth(std::size_t line, std::size_t expected, std::size_t got)
      : Error("line " + std::to_string(line) + " has " + std::to_string(got) +
              " fields, expected " + std::to_string(expected)),
        line(line), expected(expected), got(got) {}
  std::size_t line;
  std::size_t expected;
  std::size_t got;
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error("i/o error: " + what) {}
};

}  // namespace absorbkit
