#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rover/adam.hpp"
#include "rover/mlp.hpp"

namespace rover {

class BadCheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Little-endian fixed-width primitives, independent of host byte order.
void write_u64(std::ostream& out, uint64_t v);
uint64_t read_u64(std::istream& in);
void write_f64(std::ostream& out, double v);
double read_f64(std::istream& in);
void write_string(std::ostream& out, const std::string& s);
std::string read_string(std::istream& in);

void write_vec(std::ostream& out, const std::vector<double>& v);
// Reads into an already-sized vector; size mismatch is a corrupt/incompatible
// checkpoint.
void read_vec_into(std::istream& in, std::vector<double>& v);

void write_mlp(std::ostream& out, const Mlp& net);
void read_mlp_into(std::istream& in, Mlp& net);  // sizes must match net's

void write_adam(std::ostream& out, const AdamState& s);
void read_adam_into(std::istream& in, AdamState& s);
void write_adam_scalar(std::ostream& out, const AdamScalar& s);
void read_adam_scalar_into(std::istream& in, AdamScalar& s);

}  // namespace rover
