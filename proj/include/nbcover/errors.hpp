#pragma once

#include <stdexcept>
#include <string>

namespace nbcover {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define NBCOVER_DEFINE_ERROR(Name)                                        \
    struct Name : Error {                                                 \
        explicit Name(const std::string& msg = #Name) : Error(msg) {}     \
    }

// graph construction / queries
NBCOVER_DEFINE_ERROR(NotInvolution);
NBCOVER_DEFINE_ERROR(NotOrientationReversing);
NBCOVER_DEFINE_ERROR(HalfLoopHeadTailMismatch);
NBCOVER_DEFINE_ERROR(InvalidVertex);
NBCOVER_DEFINE_ERROR(NotAMorphism);
NBCOVER_DEFINE_ERROR(SizeBoundExceeded);

// covers and models
NBCOVER_DEFINE_ERROR(ParityMismatch);
NBCOVER_DEFINE_ERROR(HalfLoopsForbidden);
NBCOVER_DEFINE_ERROR(NotEtale);
NBCOVER_DEFINE_ERROR(ModelUnsupported);

// spectra
NBCOVER_DEFINE_ERROR(CrossCheckFailed);
NBCOVER_DEFINE_ERROR(NotRegularBase);
NBCOVER_DEFINE_ERROR(DomainError);

// walks
NBCOVER_DEFINE_ERROR(BudgetExceeded);
NBCOVER_DEFINE_ERROR(NotProperBeadSet);
NBCOVER_DEFINE_ERROR(NotNonBacktracking);
NBCOVER_DEFINE_ERROR(HalfLoopLengthNotOne);

// tangles
NBCOVER_DEFINE_ERROR(BoundTooLarge);
NBCOVER_DEFINE_ERROR(CatalogMismatch);
NBCOVER_DEFINE_ERROR(SubgraphNotPresent);

// nb-lang
NBCOVER_DEFINE_ERROR(InvalidWording);
NBCOVER_DEFINE_ERROR(IllConditioned);

// trace-lab
NBCOVER_DEFINE_ERROR(LengthExceedsDegree);
NBCOVER_DEFINE_ERROR(InsufficientGrid);
NBCOVER_DEFINE_ERROR(InsufficientTrials);

// io / cli
NBCOVER_DEFINE_ERROR(ParseError);

#undef NBCOVER_DEFINE_ERROR

}  // namespace nbcover
