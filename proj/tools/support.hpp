#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "primelab/primelab.h"

namespace cli {

using Json = nlohmann::ordered_json;

// Bad command line that CLI11 could not catch itself. Exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A failed library call. Exit code follows the status.
class LibraryError : public std::runtime_error {
 public:
  LibraryError(pl_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  pl_status status;
};

inline void check(pl_status s) {
  if (s != PL_OK) throw LibraryError(s, pl_last_error());
}

// Unsigned integer accepting 1000000, 1e6 and 10^6 spellings.
struct Count {
  std::uint64_t value = 0;
  operator std::uint64_t() const { return value; }
};
std::istream& operator>>(std::istream& in, Count& c);
std::ostream& operator<<(std::ostream& out, const Count& c);
std::uint64_t parse_count(std::string_view text);

template <class T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};
using TuplePtr = std::unique_ptr<pl_tuple, HandleDeleter<pl_tuple, pl_tuple_free>>;
using ArrayPtr = std::unique_ptr<pl_u64_array, HandleDeleter<pl_u64_array, pl_u64_array_free>>;
using SievePtr = std::unique_ptr<pl_sieve, HandleDeleter<pl_sieve, pl_sieve_free>>;
using FunctionPtr = std::unique_ptr<pl_test_function, HandleDeleter<pl_test_function, pl_test_function_free>>;
using HistogramPtr = std::unique_ptr<pl_histogram, HandleDeleter<pl_histogram, pl_histogram_free>>;
using CensusPtr = std::unique_ptr<pl_census, HandleDeleter<pl_census, pl_census_free>>;
using DiscrepancyPtr = std::unique_ptr<pl_discrepancy, HandleDeleter<pl_discrepancy, pl_discrepancy_free>>;

TuplePtr parse_tuple(const std::string& text, bool normalize);
// Absolute offsets as a JSON array.
Json tuple_json(const pl_tuple* t);

// Non-finite values become the strings "inf", "-inf", "nan".
Json number(double x);

enum class Format { Json, Csv };

class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;
  void update(std::string_view bytes);
  std::string hex();  // finalizes

 private:
  void* ctx_;
};

std::string sha256_hex(std::string_view bytes);

// Writes records as JSON-lines or CSV. Nested objects flatten to dotted
// column names and arrays of scalars join with ';'. Every record of one run
// has the same shape, so the first record fixes the CSV header.
class Emitter {
 public:
  Emitter(Format format, std::ostream& out) : format_(format), out_(out) {}
  void emit(const Json& record);
  std::string checksum() { return hash_.hex(); }
  std::uint64_t records() const { return records_; }

 private:
  void write(const std::string& line);
  Format format_;
  std::ostream& out_;
  Sha256 hash_;
  std::vector<std::string> header_;
  std::uint64_t records_ = 0;
};

}  // namespace cli
