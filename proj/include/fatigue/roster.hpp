#pragma once

// Roster ingestion: CSV parsing, epoch clipping and the filters applied before
// any fatigue modelling.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fatigue/timeutil.hpp"

namespace fatigue {

enum class EventKind { Crewing, Working };
enum class EventSubkind { Flight, HomeStandby, Training, Deadhead, Other };
enum class Rank { Captain, FirstOfficer, CabinCrew, Unknown };

std::string_view to_string(EventKind k);
std::string_view to_string(EventSubkind k);
std::string_view to_string(Rank r);
std::optional<EventKind> parse_event_kind(std::string_view s);
std::optional<EventSubkind> parse_event_subkind(std::string_view s);
std::optional<Rank> parse_rank(std::string_view s);

struct RosterEvent {
    std::string crew_id;
    EventKind kind = EventKind::Working;
    EventSubkind subkind = EventSubkind::Other;
    Minute start = 0;
    Minute end = 0;
    std::string origin;
    std::string destination;
    std::optional<Minute> duty_start;
    std::optional<Minute> duty_end;
    Rank rank = Rank::Unknown;

    Interval span() const { return {start, end}; }
    bool operator==(const RosterEvent&) const = default;
};

struct Epoch {
    std::string label;
    Minute begin = 0;
    Minute end = 0;
    int days = 0;

    static Epoch make(std::string label, Minute begin, int days);
    Interval span() const { return {begin, end}; }
    bool operator==(const Epoch&) const = default;
};

// The 30-day and 15-day analysis windows used for the 2019-2020 rosters.
std::vector<Epoch> standard_epochs_30d();
std::vector<Epoch> standard_epochs_15d();

struct ParseDiagnostic {
    std::size_t row = 0;  // 1-based line number in the file (header is line 1)
    std::string crew_id;  // empty when the id itself could not be read
    std::string field;
    std::string reason;
};

// Maps each logical field (id, kind, subkind, start, end, origin, destination,
// duty_start, duty_end, rank) to the header name used by a given roster format.
struct ColumnMap {
    std::map<std::string, std::string> columns;

    static ColumnMap defaults();
    const std::string& header_for(const std::string& field) const;
};

class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& column)
        : std::runtime_error("missing mandatory column: " + column), column_(column) {}
    const std::string& column() const { return column_; }

private:
    std::string column_;
};

struct ParseResult {
    std::vector<RosterEvent> events;  // sorted by (crew_id, start)
    std::vector<ParseDiagnostic> diagnostics;
};

// Throws SchemaError when one of id, kind, start or end is not in the header.
ParseResult parse_roster_csv(std::string_view text, const ColumnMap& schema = ColumnMap::defaults());

// Emits the default column layout; parse(serialize(x)) == x.
std::string serialize_roster_csv(std::span<const RosterEvent> events);

std::string diagnostics_to_jsonl(std::span<const ParseDiagnostic> diagnostics);

enum class RejectReason { None, ParseError, OverlapConflict, EmptyAfterFilter };
std::string_view to_string(RejectReason r);

struct ValidatedRoster {
    std::string crew_id;
    Epoch epoch;
    std::vector<RosterEvent> events;
    bool rejected = false;
    RejectReason reject_reason = RejectReason::None;
};

struct FilterPolicy {
    bool drop_home_standby = true;
};

// Events must belong to one crew member and be sorted by start.
ValidatedRoster apply_filters(std::span<const RosterEvent> events, const Epoch& epoch,
                              const FilterPolicy& policy = {});

// Airport -> country lookup deciding the domestic/international release time.
class AirportTable {
public:
    AirportTable() = default;
    explicit AirportTable(std::string home_country) : home_(std::move(home_country)) {}

    // "code,country" rows with a header line.
    static AirportTable from_csv(std::string_view text, std::string home_country = "BR");

    void add(std::string code, std::string country);
    // Unknown airports count as domestic.
    bool is_domestic(std::string_view code) const;
    const std::string& home_country() const { return home_; }

private:
    std::string home_ = "BR";
    std::map<std::string, std::string, std::less<>> country_;
};

struct DutyPolicy {
    Minute report_before = 60;
    Minute release_domestic = 30;
    Minute release_international = 45;
    AirportTable airports;
};

// Check-in/check-out for one event: the roster values when present, otherwise
// report_before ahead of departure and the domestic/international release
// after landing. Working events without duty fields use their own span.
Interval duty_bounds(const RosterEvent& event, const DutyPolicy& policy);

// Returns (duty_start, duty_end) per the defaulting rule for Crewing events.
std::pair<Minute, Minute> default_duty_bounds(const RosterEvent& event, const DutyPolicy& policy);

// Union of the duty bounds of all events, overlapping or touching intervals
// merged, clipped to the roster epoch.
std::vector<Interval> duty_periods(const ValidatedRoster& roster, const DutyPolicy& policy);

// Splits a sorted event list into per-crew runs.
std::map<std::string, std::vector<RosterEvent>> group_by_crew(std::span<const RosterEvent> events);

}  // namespace fatigue
