#include "polluterwatch/tweet.hpp"

#include <ostream>
#include <string>

#include "polluterwatch/csv.hpp"
#include "polluterwatch/errors.hpp"

namespace pw {

std::optional<City> parse_city(std::string_view name) {
  if (name == "Adelaide") return City::Adelaide;
  if (name == "Brisbane") return City::Brisbane;
  if (name == "Melbourne") return City::Melbourne;
  if (name == "Perth") return City::Perth;
  if (name == "Sydney") return City::Sydney;
  if (name == "Australia") return City::Australia;
  return std::nullopt;
}

std::string_view city_name(City city) {
  switch (city) {
    case City::Adelaide: return "Adelaide";
    case City::Brisbane: return "Brisbane";
    case City::Melbourne: return "Melbourne";
    case City::Perth: return "Perth";
    case City::Sydney: return "Sydney";
    case City::Australia: return "Australia";
  }
  return "Australia";
}

EventCalendar EventCalendar::from_csv(std::istream& in) {
  EventCalendar calendar;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = csv::split_line(line);
    if (line_no == 1 && fields.size() == 2 && fields[0] == "city" &&
        fields[1] == "date") {
      continue;
    }
    if (fields.size() != 2)
      throw FileFormatError("calendar line " + std::to_string(line_no) +
                            ": expected city,date");
    auto city = parse_city(fields[0]);
    if (!city)
      throw FileFormatError("calendar line " + std::to_string(line_no) +
                            ": unknown city '" + fields[0] + "'");
    auto date = parse_date(fields[1]);
    if (!date)
      throw FileFormatError("calendar line " + std::to_string(line_no) +
                            ": bad date '" + fields[1] + "'");
    calendar.add(*city, *date);
  }
  return calendar;
}

void write_calendar_csv(const EventCalendar& calendar, std::ostream& out) {
  out << "city,date\n";
  for (const auto& [city, dates] : calendar.entries)
    for (Date d : dates)
      out << city_name(city) << ',' << format_date(d) << '\n';
}

std::size_t unicode_scalar_count(std::string_view utf8) {
  std::size_t count = 0;
  for (unsigned char c : utf8)
    if ((c & 0xC0) != 0x80) ++count;
  return count;
}

}  // namespace pw
