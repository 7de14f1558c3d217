#include <doctest.h>

#include "smartslice/catalog.hpp"
#include "smartslice/errors.hpp"
#include "smartslice/parser.hpp"

using namespace smartslice;

TEST_CASE("default catalog carries the thirteen sink names") {
    Catalog cat = default_catalog();
    CHECK(cat.sink_names.size() == 13);
    CHECK(cat.is_sink("sendPush"));
    CHECK(cat.is_sink("httpDelete"));
    CHECK(cat.is_sink("httpGet"));
    CHECK(cat.is_sink("httpHead"));
    CHECK(cat.is_sink("httpPost"));
    CHECK(cat.is_sink("httpPostJson"));
    CHECK(cat.is_sink("httpPut"));
    CHECK(cat.is_sink("sendSms"));
    CHECK(cat.is_sink("sendSmsMessage"));
    CHECK(cat.is_sink("sendNotificationEvent"));
    CHECK(cat.is_sink("sendNotification"));
    CHECK(cat.is_sink("sendNotificationToContacts"));
    CHECK(cat.is_sink("sendPushMessage"));
    CHECK_FALSE(cat.is_sink("unlock"));
}

TEST_CASE("default catalog enables every source kind") {
    Catalog cat = default_catalog();
    for (SourceKind kind :
         {SourceKind::UserInput, SourceKind::StateVariable, SourceKind::DeviceState,
          SourceKind::DeviceInfo, SourceKind::Location, SourceKind::EventParam})
        CHECK(cat.enabled(kind));
}

TEST_CASE("state property reads classify as state_variable") {
    Program p = parse_text("state.firstCounter = x\ndef y = state.secondCounter\n");
    SourceIndex index(p, default_catalog());
    CHECK(index.classify_property("state", "firstCounter") ==
          SourceKind::StateVariable);
    CHECK(index.classify_property("state", "secondCounter") ==
          SourceKind::StateVariable);
}

TEST_CASE("input-declared identifiers classify as user_input") {
    std::string text =
        "preferences {\n"
        "    section(\"s\") {\n"
        "        input \"themotion\", \"capability.motionSensor\"\n"
        "    }\n"
        "}\n";
    Program p = parse_text(text);
    SourceIndex index(p, default_catalog());
    CHECK(index.classify_identifier("themotion") == SourceKind::UserInput);
    CHECK(index.classify_identifier("other") == std::nullopt);
    CHECK(index.classify_property("themotion", "currentMotion") ==
          SourceKind::DeviceState);
    CHECK(index.classify_property("themotion", "displayName") ==
          SourceKind::DeviceInfo);
}

TEST_CASE("plain string literals classify as nothing") {
    Program p = parse_text("def x = \"no sensitive data\"\n");
    SourceIndex index(p, default_catalog());
    auto* assign = std::get_if<Assignment>(&p.top_statements[0].node);
    REQUIRE(assign != nullptr);
    CHECK(index.classify(assign->value) == std::nullopt);
}

TEST_CASE("location identifier classifies as location") {
    Program p = parse_text("def x = location\n");
    SourceIndex index(p, default_catalog());
    CHECK(index.classify_identifier("location") == SourceKind::Location);
}

TEST_CASE("config adds a sink by union") {
    Catalog cat = load_catalog("sinks:\nexfiltrate\n");
    CHECK(cat.sink_names.size() == 14);
    CHECK(cat.is_sink("exfiltrate"));
    CHECK(cat.is_sink("sendPush"));
}

TEST_CASE("config can remove a sink") {
    Catalog cat = load_catalog("sinks:\n-sendPush\n");
    CHECK_FALSE(cat.is_sink("sendPush"));
    CHECK(cat.sink_names.size() == 12);
}

TEST_CASE("source_kinds section replaces the enabled set") {
    Catalog cat = load_catalog("source_kinds:\nuser_input\nevent_param\n");
    CHECK(cat.enabled(SourceKind::UserInput));
    CHECK(cat.enabled(SourceKind::EventParam));
    CHECK_FALSE(cat.enabled(SourceKind::StateVariable));
}

TEST_CASE("disabling state_variable declassifies state reads") {
    Program p = parse_text("def y = state.secret\nsendSms(y)\n");
    Catalog no_state = load_catalog(
        "source_kinds:\nuser_input\ndevice_state\ndevice_info\nlocation\nevent_param\n");
    SourceIndex index(p, no_state);
    CHECK(index.classify_property("state", "secret") == std::nullopt);
}

TEST_CASE("unknown section raises ConfigError naming the line") {
    try {
        load_catalog("snik:\nsendPush\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 1);
    }
}

TEST_CASE("malformed entry raises ConfigError") {
    CHECK_THROWS_AS(load_catalog("sinks:\nnot an identifier\n"), ConfigError);
}

TEST_CASE("catalog round-trips through its rendering") {
    Catalog def = default_catalog();
    Catalog loaded = load_catalog(render_catalog(def));
    CHECK(loaded.sink_names == def.sink_names);
    CHECK(loaded.source_kinds == def.source_kinds);
    CHECK(loaded.extra_source_idents == def.extra_source_idents);
}

TEST_CASE("extra source identifiers classify as user_input") {
    Catalog cat = load_catalog("sources:\nsensitiveData\n");
    Program p = parse_text("def m = sensitiveData\n");
    SourceIndex index(p, cat);
    CHECK(index.classify_identifier("sensitiveData") == SourceKind::UserInput);
}
