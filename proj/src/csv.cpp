#include "ionshuttle/csv.hpp"

#include <cstdio>

namespace ionshuttle::csv {

std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void Writer::row(std::initializer_list<std::string> fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) os_ << ',';
    os_ << escape(f);
    first = false;
  }
  end_row();
}

void Writer::write_field(double v, bool& first) {
  if (!first) os_ << ',';
  os_ << format(v);
  first = false;
}

void Writer::write_field(const std::string& s, bool& first) {
  if (!first) os_ << ',';
  os_ << escape(s);
  first = false;
}

void Writer::write_field(const char* s, bool& first) {
  write_field(std::string(s), first);
}

void Writer::end_row() { os_ << "\r\n"; }

}  // namespace ionshuttle::csv
