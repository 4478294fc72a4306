#include "patternboost/transformer/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pb::transformer {

namespace {

template <class T>
constexpr const char* precision_name() {
  return sizeof(T) == 4 ? "f32" : "f64";
}

// Hex floats keep the optimizer settings bit-exact through the text header.
std::string hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double parse_hex(const std::string& s) {
  std::size_t used = 0;
  double x = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad number '" + s + "'");
  return x;
}

template <class T>
void write_vec(std::ostream& out, const std::vector<T>& v) {
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <class T>
void read_vec(std::istream& in, std::vector<T>& v, const std::string& what) {
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
  if (!in) throw std::runtime_error("checkpoint truncated in " + what);
}

}  // namespace

template <class T>
void save_checkpoint(const std::filesystem::path& path, const Model<T>& model, const AdamW<T>& opt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto& c = model.config();
  out << "patternboost-model v1 " << precision_name<T>() << " layers " << c.n_layers << " dim " << c.dim << " heads "
      << c.n_heads << " vocab " << c.vocab << " max_len " << c.max_len << " seed " << c.seed << " lr "
      << hex(opt.cfg.lr) << " wd " << hex(opt.cfg.weight_decay) << " beta1 " << hex(opt.cfg.beta1) << " beta2 "
      << hex(opt.cfg.beta2) << " eps " << hex(opt.cfg.eps) << " params " << model.size() << '\n';
  write_vec(out, model.params());
  write_vec(out, opt.m);
  write_vec(out, opt.v);
  const std::uint64_t step = opt.step;
  out.write(reinterpret_cast<const char*>(&step), sizeof step);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

template <class T>
void load_checkpoint(const std::filesystem::path& path, Model<T>& model, AdamW<T>& opt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error(path.string() + ": empty checkpoint");
  std::istringstream hs(header);
  std::string magic, version, precision;
  hs >> magic >> version >> precision;
  if (magic != "patternboost-model" || version != "v1")
    throw std::runtime_error(path.string() + ": not a patternboost model checkpoint");
  if (precision != precision_name<T>())
    throw std::runtime_error(path.string() + ": checkpoint precision " + precision + " does not match " +
                             precision_name<T>());
  ModelConfig c;
  AdamWConfig a;
  std::size_t count = 0;
  std::string key, value;
  int seen = 0;
  while (hs >> key >> value) {
    ++seen;
    if (key == "layers") c.n_layers = std::stoi(value);
    else if (key == "dim") c.dim = std::stoi(value);
    else if (key == "heads") c.n_heads = std::stoi(value);
    else if (key == "vocab") c.vocab = std::stoi(value);
    else if (key == "max_len") c.max_len = std::stoi(value);
    else if (key == "seed") c.seed = std::stoull(value);
    else if (key == "lr") a.lr = parse_hex(value);
    else if (key == "wd") a.weight_decay = parse_hex(value);
    else if (key == "beta1") a.beta1 = parse_hex(value);
    else if (key == "beta2") a.beta2 = parse_hex(value);
    else if (key == "eps") a.eps = parse_hex(value);
    else if (key == "params") count = std::stoull(value);
    else throw std::runtime_error(path.string() + ": unknown header field '" + key + "'");
  }
  if (seen != 12) throw std::runtime_error(path.string() + ": incomplete checkpoint header");
  Model<T> m(c);
  if (m.size() != count)
    throw std::runtime_error(path.string() + ": header declares " + std::to_string(count) + " parameters, config implies " +
                             std::to_string(m.size()));
  AdamW<T> o(a, count);
  read_vec(in, m.params(), "parameters");
  read_vec(in, o.m, "first moments");
  read_vec(in, o.v, "second moments");
  std::uint64_t step = 0;
  in.read(reinterpret_cast<char*>(&step), sizeof step);
  if (!in) throw std::runtime_error(path.string() + ": checkpoint truncated in step counter");
  if (in.peek() != std::char_traits<char>::eof()) throw std::runtime_error(path.string() + ": trailing bytes after checkpoint");
  o.step = step;
  model = std::move(m);
  opt = std::move(o);
}

template void save_checkpoint<float>(const std::filesystem::path&, const Model<float>&, const AdamW<float>&);
template void save_checkpoint<double>(const std::filesystem::path&, const Model<double>&, const AdamW<double>&);
template void load_checkpoint<float>(const std::filesystem::path&, Model<float>&, AdamW<float>&);
template void load_checkpoint<double>(const std::filesystem::path&, Model<double>&, AdamW<double>&);

}  // namespace pb::transformer
