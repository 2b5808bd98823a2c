#include "rover/serialize.hpp"

#include <cstring>
#include <istream>
#include <ostream>

namespace rover {

void write_u64(std::ostream& out, uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), 8);
}

uint64_t read_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw BadCheckpointError("truncated checkpoint");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return v;
}

void write_f64(std::ostream& out, double v) {
  uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  write_u64(out, bits);
}

double read_f64(std::istream& in) {
  const uint64_t bits = read_u64(in);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

void write_string(std::ostream& out, const std::string& s) {
  write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  const uint64_t n = read_u64(in);
  if (n > 1024) throw BadCheckpointError("implausible string length");
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (!in) throw BadCheckpointError("truncated checkpoint");
  return s;
}

void write_vec(std::ostream& out, const std::vector<double>& v) {
  write_u64(out, v.size());
  for (double x : v) write_f64(out, x);
}

void read_vec_into(std::istream& in, std::vector<double>& v) {
  const uint64_t n = read_u64(in);
  if (n != v.size()) throw BadCheckpointError("array size mismatch");
  for (double& x : v) x = read_f64(in);
}

void write_mlp(std::ostream& out, const Mlp& net) {
  write_u64(out, net.sizes.size());
  for (size_t s : net.sizes) write_u64(out, s);
  for (const auto& w : net.w) write_vec(out, w);
  for (const auto& b : net.b) write_vec(out, b);
}

void read_mlp_into(std::istream& in, Mlp& net) {
  const uint64_t depth = read_u64(in);
  if (depth != net.sizes.size()) throw BadCheckpointError("layer count mismatch");
  for (size_t s : net.sizes)
    if (read_u64(in) != s) throw BadCheckpointError("layer size mismatch");
  for (auto& w : net.w) read_vec_into(in, w);
  for (auto& b : net.b) read_vec_into(in, b);
}

void write_adam(std::ostream& out, const AdamState& s) {
  write_f64(out, s.params.lr);
  write_f64(out, s.params.beta1);
  write_f64(out, s.params.beta2);
  write_f64(out, s.params.eps);
  write_u64(out, s.t);
  write_u64(out, s.w.size());
  for (size_t l = 0; l < s.w.size(); ++l) {
    write_vec(out, s.w[l].m);
    write_vec(out, s.w[l].v);
    write_vec(out, s.b[l].m);
    write_vec(out, s.b[l].v);
  }
}

void read_adam_into(std::istream& in, AdamState& s) {
  s.params.lr = read_f64(in);
  s.params.beta1 = read_f64(in);
  s.params.beta2 = read_f64(in);
  s.params.eps = read_f64(in);
  s.t = read_u64(in);
  if (read_u64(in) != s.w.size()) throw BadCheckpointError("optimizer layer count mismatch");
  for (size_t l = 0; l < s.w.size(); ++l) {
    read_vec_into(in, s.w[l].m);
    read_vec_into(in, s.w[l].v);
    read_vec_into(in, s.b[l].m);
    read_vec_into(in, s.b[l].v);
  }
}

void write_adam_scalar(std::ostream& out, const AdamScalar& s) {
  write_f64(out, s.params.lr);
  write_f64(out, s.params.beta1);
  write_f64(out, s.params.beta2);
  write_f64(out, s.params.eps);
  write_u64(out, s.t);
  write_f64(out, s.m);
  write_f64(out, s.v);
}

void read_adam_scalar_into(std::istream& in, AdamScalar& s) {
  s.params.lr = read_f64(in);
  s.params.beta1 = read_f64(in);
  s.params.beta2 = read_f64(in);
  s.params.eps = read_f64(in);
  s.t = read_u64(in);
  s.m = read_f64(in);
  s.v = read_f64(in);
}

}  // namespace rover
