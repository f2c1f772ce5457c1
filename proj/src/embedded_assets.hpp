#pragma once

// Build-time snapshots of the versioned text assets under templates/ and
// data/keywords/. Generated into embedded_assets.cpp by CMake; the files on
// disk stay the source of truth.

namespace reasontrans::assets {

extern const char* const kPythonKeywords;
extern const char* const kJavaKeywords;
extern const char* const kCppKeywords;

extern const char* const kTemplateSynthesis;
extern const char* const kTemplateSftStyle;
extern const char* const kTemplateAgentTranslate;
extern const char* const kTemplateAgentRepair;
extern const char* const kTemplateTestgen;

}  // namespace reasontrans::assets
