#pragma once

#include <stdexcept>
#include <string>

namespace tabml {

// Base class for every failure the library reports. Subtypes exist so that
// callers (and the CLI exit-code mapping) can tell usage mistakes, data
// problems and internal inconsistencies apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

// Schema is malformed or does not match the data (missing column, no target).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A categorical cell holds a value outside its feature's encoding.
class EncodingError : public Error {
 public:
  using Error::Error;
};

// An operation that requires complete data saw a missing cell.
class IncompleteDataError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied parameter is out of range or otherwise invalid.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Class balancing is impossible (single-class data).
class BalanceError : public Error {
 public:
  using Error::Error;
};

// Stratified splitting is impossible (a class has too few rows).
class StratificationError : public Error {
 public:
  using Error::Error;
};

// ANOVA grouping is degenerate (fewer than two groups).
class GroupingError : public Error {
 public:
  using Error::Error;
};

// Not enough observations for the requested statistic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// A feature name was not found.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Matrix/vector dimensions do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Model training failed (e.g. single-class training data).
class FitError : public Error {
 public:
  using Error::Error;
};

// Metric inputs are invalid (length mismatch, non-binary labels, empty).
class InputError : public Error {
 public:
  using Error::Error;
};

// ROC AUC is undefined (single-class ground truth).
class AucError : public Error {
 public:
  using Error::Error;
};

// Experiment or model configuration is invalid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Two reports cannot be compared (mismatched dataset or seed).
class ComparisonError : public Error {
 public:
  using Error::Error;
};

}  // namespace tabml
