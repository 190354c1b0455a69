#pragma once

#include <stdexcept>
#include <string>

namespace worldgen {

struct SyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutOfBoundsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadParamsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TierOrderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NavigabilityImpossibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownIdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateBoundsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyMeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyResultError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroAreaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadKError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyCloudError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateCloudError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptySetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientAssetsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace worldgen
