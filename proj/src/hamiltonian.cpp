#include "adpqe/hamiltonian.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "adpqe/errors.hpp"
#include "adpqe/excitation.hpp"

namespace adpqe {

MolecularHamiltonian::MolecularHamiltonian(int n_spatial, int n_electrons, int sz2,
                                           double core_energy)
    : n_spatial_(n_spatial), n_electrons_(n_electrons), sz2_(sz2), core_energy_(core_energy) {
  if (n_spatial <= 0 || n_spatial > kMaxSpatialOrbitals) {
    throw RangeError("orbital count " + std::to_string(n_spatial) + " outside [1, " +
                     std::to_string(kMaxSpatialOrbitals) + "]");
  }
  if (n_electrons < 0 || n_electrons > 2 * n_spatial) {
    throw ConfigurationError("electron count " + std::to_string(n_electrons) +
                             " does not fit in " + std::to_string(n_spatial) + " orbitals");
  }
  const std::size_t n = n_spatial;
  h1_.assign(n * n, 0.0);
  h2_.assign(n * n * n * n, 0.0);
}

void MolecularHamiltonian::set_one_body(int p, int q, double value) {
  h1_[idx2(p, q)] = value;
  h1_[idx2(q, p)] = value;
}

void MolecularHamiltonian::set_two_body(int p, int q, int r, int s, double value) {
  for (auto [a, b, c, d] : {std::array{p, q, r, s}, std::array{q, p, r, s},
                            std::array{p, q, s, r}, std::array{q, p, s, r},
                            std::array{r, s, p, q}, std::array{s, r, p, q},
                            std::array{r, s, q, p}, std::array{s, r, q, p}}) {
    h2_[idx4(a, b, c, d)] = value;
  }
}

double MolecularHamiltonian::so_one_body(int p, int q) const {
  if ((p & 1) != (q & 1)) return 0.0;
  return one_body(p >> 1, q >> 1);
}

double MolecularHamiltonian::so_two_body(int p, int q, int r, int s) const {
  if ((p & 1) != (r & 1) || (q & 1) != (s & 1)) return 0.0;
  return two_body(p >> 1, r >> 1, q >> 1, s >> 1);
}

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

struct HeaderToken {
  std::string text;
  int line;
};

bool is_header_end(const std::string& tok) {
  const std::string u = upper(tok);
  return u == "&END" || u == "/" || u == "$END" || u == "&";
}

int parse_int(const HeaderToken& tok) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(tok.text, &used);
  } catch (const std::exception&) {
    throw ParseError("expected integer in header, got '" + tok.text + "'", tok.line);
  }
  if (used != tok.text.size()) {
    throw ParseError("expected integer in header, got '" + tok.text + "'", tok.line);
  }
  return value;
}

double parse_real(std::string text, int line) {
  std::replace_if(text.begin(), text.end(), [](char c) { return c == 'D' || c == 'd'; }, 'E');
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw ParseError("invalid integral value '" + text + "'", line);
  }
  return v;
}

struct Header {
  int norb = -1;
  int nelec = -1;
  int ms2 = 0;
  std::vector<int> orbsym;
};

// Reads the namelist block and leaves the stream at the first record line.
Header read_header(std::istream& in, int& line_no) {
  std::vector<HeaderToken> tokens;
  std::string line;
  bool ended = false;
  while (!ended && std::getline(in, line)) {
    ++line_no;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    // Split "KEY=value" into "KEY=" "value" so both spellings parse alike.
    std::string spaced;
    for (char c : line) {
      spaced += c;
      if (c == '=') spaced += ' ';
    }
    std::istringstream ss(spaced);
    std::string tok;
    while (ss >> tok) {
      if (is_header_end(tok)) {
        ended = true;
        break;
      }
      tokens.push_back({tok, line_no});
    }
  }
  if (tokens.empty() || upper(tokens.front().text) != "&FCI") {
    throw ParseError("FCIDUMP must start with &FCI namelist",
                     tokens.empty() ? line_no : tokens.front().line);
  }
  if (!ended) throw ParseError("unterminated &FCI namelist", line_no);

  Header hdr;
  std::string key;
  int key_line = 0;
  std::vector<HeaderToken> values;
  auto flush = [&]() {
    if (key.empty()) return;
    if (key == "NORB" || key == "NELEC" || key == "MS2" || key == "ISYM") {
      if (values.size() != 1) throw ParseError(key + " expects one value", key_line);
      const int v = parse_int(values.front());
      if (key == "NORB") hdr.norb = v;
      if (key == "NELEC") hdr.nelec = v;
      if (key == "MS2") hdr.ms2 = v;
    } else if (key == "ORBSYM") {
      for (const auto& v : values) hdr.orbsym.push_back(parse_int(v));
    }
    // Other keys (UHF, IUHF, ST, ...) are accepted and ignored.
    key.clear();
    values.clear();
  };
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (!tok.text.empty() && tok.text.back() == '=') {
      flush();
      key = upper(tok.text.substr(0, tok.text.size() - 1));
      key_line = tok.line;
      if (key.empty()) throw ParseError("dangling '=' in header", tok.line);
    } else if (tok.text == "=") {
      throw ParseError("dangling '=' in header", tok.line);
    } else {
      if (key.empty()) throw ParseError("value '" + tok.text + "' without key", tok.line);
      values.push_back(tok);
    }
  }
  flush();
  if (hdr.norb < 0) throw ParseError("header missing NORB", line_no);
  if (hdr.nelec < 0) throw ParseError("header missing NELEC", line_no);
  return hdr;
}

}  // namespace

MolecularHamiltonian parse_fcidump(std::istream& in) {
  int line_no = 0;
  const Header hdr = read_header(in, line_no);
  if (hdr.norb > kMaxSpatialOrbitals || hdr.norb <= 0) {
    throw RangeError("NORB=" + std::to_string(hdr.norb) + " outside supported range [1, " +
                     std::to_string(kMaxSpatialOrbitals) + "]");
  }
  MolecularHamiltonian h(hdr.norb, hdr.nelec, hdr.ms2, 0.0);
  if (!hdr.orbsym.empty()) {
    if (static_cast<int>(hdr.orbsym.size()) != hdr.norb) {
      throw ParseError("ORBSYM has " + std::to_string(hdr.orbsym.size()) + " entries, expected " +
                           std::to_string(hdr.norb),
                       line_no);
    }
    h.set_orbital_symmetry(hdr.orbsym);
  }

  const std::size_t n = hdr.norb;
  std::vector<char> seen1(n * n, 0);
  std::vector<char> seen2(n * n * n * n, 0);
  bool seen_core = false;

  auto check = [&](bool seen, double old_value, double value, int line) {
    if (seen && std::abs(old_value - value) > kFcidumpConsistencyTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "line " << line << ": record " << value << " conflicts with earlier value "
          << old_value;
      throw ConsistencyError(msg.str());
    }
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::vector<std::string> fields;
    std::string f;
    while (ss >> f) fields.push_back(f);
    if (fields.empty()) continue;
    if (fields.size() != 5) {
      throw ParseError("expected 'value i j k l', got " + std::to_string(fields.size()) +
                           " fields",
                       line_no);
    }
    const double value = parse_real(fields[0], line_no);
    std::array<int, 4> idx{};
    for (int k = 0; k < 4; ++k) {
      const HeaderToken tok{fields[k + 1], line_no};
      idx[k] = parse_int(tok);
      if (idx[k] < 0 || idx[k] > hdr.norb) {
        throw RangeError("line " + std::to_string(line_no) + ": index " +
                         std::to_string(idx[k]) + " outside [0, " + std::to_string(hdr.norb) +
                         "]");
      }
    }
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      check(seen_core, h.core_energy(), value, line_no);
      h.set_core_energy(value);
      seen_core = true;
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      const int p = std::min(i, j) - 1;
      const int q = std::max(i, j) - 1;
      check(seen1[p * n + q], h.one_body(p, q), value, line_no);
      seen1[p * n + q] = 1;
      h.set_one_body(p, q, value);
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // Orbital energy record; not needed.
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      int p = i - 1, q = j - 1, r = k - 1, s = l - 1;
      if (p < q) std::swap(p, q);
      if (r < s) std::swap(r, s);
      if (p * n + q < r * n + s) {
        std::swap(p, r);
        std::swap(q, s);
      }
      const std::size_t key = ((p * n + q) * n + r) * n + s;
      check(seen2[key], h.two_body(p, q, r, s), value, line_no);
      seen2[key] = 1;
      h.set_two_body(p, q, r, s, value);
    } else {
      throw ParseError("unrecognised index pattern " + fields[1] + " " + fields[2] + " " +
                           fields[3] + " " + fields[4],
                       line_no);
    }
  }
  return h;
}

MolecularHamiltonian parse_fcidump_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open FCIDUMP file " + path.string());
  return parse_fcidump(in);
}

std::uint64_t ReferenceData::determinant_bits() const {
  std::uint64_t bits = 0;
  for (int i : occupied) bits |= std::uint64_t{1} << i;
  return bits;
}

ReferenceData hf_reference(const MolecularHamiltonian& h) {
  const int ne = h.n_electrons();
  if (((ne + h.sz2()) & 1) != 0) {
    throw ConfigurationError("NELEC=" + std::to_string(ne) + " and MS2=" +
                             std::to_string(h.sz2()) + " have different parity");
  }
  const int n_alpha = (ne + h.sz2()) / 2;
  const int n_beta = (ne - h.sz2()) / 2;
  if (n_alpha < 0 || n_beta < 0 || n_alpha > h.n_spatial() || n_beta > h.n_spatial()) {
    throw ConfigurationError("no aufbau determinant with " + std::to_string(n_alpha) +
                             " alpha and " + std::to_string(n_beta) + " beta electrons in " +
                             std::to_string(h.n_spatial()) + " orbitals");
  }

  ReferenceData ref;
  ref.n_spin_orbitals = h.n_spin_orbitals();
  for (int so = 0; so < ref.n_spin_orbitals; ++so) {
    const int spatial = so >> 1;
    const bool occ = (so & 1) == 0 ? spatial < n_alpha : spatial < n_beta;
    (occ ? ref.occupied : ref.virtuals).push_back(so);
  }

  ref.fock_diagonal.resize(ref.n_spin_orbitals);
  for (int p = 0; p < ref.n_spin_orbitals; ++p) {
    double e = h.so_one_body(p, p);
    for (int j : ref.occupied) e += h.so_antisymmetrized(p, j, p, j);
    ref.fock_diagonal[p] = e;
  }

  double e = h.core_energy();
  for (int i : ref.occupied) e += h.so_one_body(i, i);
  double two = 0.0;
  for (int i : ref.occupied) {
    for (int j : ref.occupied) two += h.so_antisymmetrized(i, j, i, j);
  }
  ref.hf_energy = e + 0.5 * two;
  return ref;
}

Denominator mp_denominator(const Excitation& exc, const ReferenceData& ref) {
  const int n = ref.n_spin_orbitals;
  double d = 0.0;
  for (int i : exc.holes) {
    if (i < 0 || i >= n) throw RangeError("hole index " + std::to_string(i) + " out of range");
    d += ref.fock_diagonal[i];
  }
  for (int a : exc.particles) {
    if (a < 0 || a >= n) {
      throw RangeError("particle index " + std::to_string(a) + " out of range");
    }
    d -= ref.fock_diagonal[a];
  }
  if (std::abs(d) < kDenominatorFloor) {
    return {d > 0.0 ? kDenominatorFloor : -kDenominatorFloor, true};
  }
  return {d, false};
}

}  // namespace adpqe
