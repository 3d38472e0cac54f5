#pragma once

#include <stdexcept>
#include <string>

namespace sccuc {

// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file missing, unreadable, or not matching its documented schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Branch graph is disconnected or otherwise unusable for fault analysis.
class TopologyError : public Error {
 public:
  using Error::Error;
};

class DegenerateNetworkError : public Error {
 public:
  using Error::Error;
};

// Vector lengths or ids do not match the model they are used with.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  using Error::Error;
};

// A recomputed quantity disagrees with the solver beyond tolerance.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace sccuc
