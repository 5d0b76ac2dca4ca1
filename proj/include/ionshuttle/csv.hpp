#pragma once

#include <initializer_list>
#include <ostream>
#include <string>

namespace ionshuttle::csv {

/// Formats a double with 17 significant digits, '.' decimal separator,
/// locale independent.
std::string format(double v);

/// RFC-4180 field quoting (only applied when the field needs it).
std::string escape(const std::string& field);

/// Minimal row-oriented CSV writer with CRLF line endings.
class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}

  void row(std::initializer_list<std::string> fields);

  template <typename... Ts>
  void row(Ts... vals) {
    bool first = true;
    (write_field(vals, first), ...);
    end_row();
  }

 private:
  void write_field(double v, bool& first);
  void write_field(const std::string& s, bool& first);
  void write_field(const char* s, bool& first);
  void end_row();

  std::ostream& os_;
};

}  // namespace ionshuttle::csv
