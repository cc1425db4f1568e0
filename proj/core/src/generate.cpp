#include "dspanner/generate.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <vector>

#include "dspanner/error.hpp"
#include "dspanner/rounding.hpp"

namespace dspanner {

namespace {

[[noreturn]] void bad_spec(const std::string& what) { throw Error(ErrorCode::kBadSpec, what); }

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    bad_spec("bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
  }
  return out;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kErdosRenyi: return "er";
    case Family::kCycle: return "cycle";
    case Family::kLayered: return "layered";
    case Family::kGrid: return "grid";
  }
  return "er";
}

class Lengths {
 public:
  Lengths(int max_length, std::mt19937_64& rng) : max_(max_length), rng_(rng) {}
  Length next() {
    if (max_ == 1) return 1.0;
    return 1.0 + std::floor(uniform01(rng_) * max_);
  }

 private:
  int max_;
  std::mt19937_64& rng_;
};

}  // namespace

InstanceSpec parse_instance_spec(std::string_view text) {
  InstanceSpec spec;
  const std::size_t colon = text.find(':');
  const std::string_view family = text.substr(0, colon);
  if (family == "er") {
    spec.family = Family::kErdosRenyi;
  } else if (family == "cycle") {
    spec.family = Family::kCycle;
  } else if (family == "layered") {
    spec.family = Family::kLayered;
  } else if (family == "grid") {
    spec.family = Family::kGrid;
  } else {
    bad_spec("unknown family '" + std::string(family) + "' (expected er, cycle, layered, grid)");
  }
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) bad_spec("expected key=value, got '" + std::string(item) + "'");
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "n") {
      spec.n = parse_number<std::size_t>(key, value);
    } else if (key == "p") {
      spec.p = parse_number<double>(key, value);
    } else if (key == "maxlen") {
      spec.max_length = parse_number<int>(key, value);
    } else if (key == "layers") {
      spec.layers = parse_number<std::size_t>(key, value);
    } else if (key == "rows") {
      spec.rows = parse_number<std::size_t>(key, value);
    } else if (key == "bidir") {
      spec.bidirectional = parse_number<int>(key, value) != 0;
    } else if (key == "seed") {
      spec.seed = parse_number<std::uint64_t>(key, value);
    } else {
      bad_spec("unknown key '" + std::string(key) + "'");
    }
  }
  return spec;
}

std::string to_string(const InstanceSpec& spec) {
  std::string out(family_name(spec.family));
  out += ":n=" + std::to_string(spec.n);
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, spec.p);
  if (spec.family == Family::kErdosRenyi || spec.family == Family::kLayered) out += ",p=" + std::string(buf, ptr);
  out += ",maxlen=" + std::to_string(spec.max_length);
  if (spec.family == Family::kLayered) out += ",layers=" + std::to_string(spec.layers);
  if (spec.family == Family::kGrid) {
    out += ",rows=" + std::to_string(spec.rows) + ",bidir=" + (spec.bidirectional ? "1" : "0");
  }
  out += ",seed=" + std::to_string(spec.seed);
  return out;
}

DiGraph generate_instance(const InstanceSpec& spec) {
  if (spec.max_length < 1) bad_spec("maxlen must be >= 1");
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) bad_spec("p must lie in [0, 1]");
  std::mt19937_64 rng(mix_seed(spec.seed));
  Lengths lengths(spec.max_length, rng);
  std::vector<Edge> edges;
  const std::size_t n = spec.n;

  switch (spec.family) {
    case Family::kErdosRenyi:
      for (VertexId a = 0; a < n; ++a) {
        for (VertexId b = 0; b < n; ++b) {
          if (a == b) continue;
          if (uniform01(rng) < spec.p) edges.push_back({a, b, lengths.next()});
        }
      }
      break;
    case Family::kCycle:
      if (n < 2) bad_spec("cycle needs n >= 2");
      for (VertexId a = 0; a < n; ++a) {
        edges.push_back({a, static_cast<VertexId>((a + 1) % n), lengths.next()});
      }
      break;
    case Family::kLayered: {
      if (spec.layers < 2 || spec.layers > n) bad_spec("layered needs 2 <= layers <= n");
      std::vector<std::size_t> band(n);
      for (std::size_t v = 0; v < n; ++v) band[v] = v * spec.layers / n;
      for (VertexId a = 0; a < n; ++a) {
        for (VertexId b = 0; b < n; ++b) {
          if (band[b] != band[a] + 1) continue;
          if (uniform01(rng) < spec.p) edges.push_back({a, b, lengths.next()});
        }
      }
      break;
    }
    case Family::kGrid: {
      std::size_t rows = spec.rows;
      if (rows == 0) {
        rows = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
        while (rows > 1 && n % rows != 0) --rows;
      }
      if (rows == 0 || n % rows != 0) bad_spec("grid rows must divide n");
      const std::size_t cols = n / rows;
      auto id = [cols](std::size_t r, std::size_t c) { return static_cast<VertexId>(r * cols + c); };
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          if (c + 1 < cols) {
            edges.push_back({id(r, c), id(r, c + 1), lengths.next()});
            if (spec.bidirectional) edges.push_back({id(r, c + 1), id(r, c), lengths.next()});
          }
          if (r + 1 < rows) {
            edges.push_back({id(r, c), id(r + 1, c), lengths.next()});
            if (spec.bidirectional) edges.push_back({id(r + 1, c), id(r, c), lengths.next()});
          }
        }
      }
      break;
    }
  }
  return DiGraph::build(n, std::move(edges));
}

}  // namespace dspanner
