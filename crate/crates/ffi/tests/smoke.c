#include <stdio.h>
#include <string.h>

#include "reflekt.h"

static int fail(const char *what) {
    const char *msg = reflekt_last_error();
    fprintf(stderr, "%s: %s\n", what, msg ? msg : "(no message)");
    return 1;
}

int main(void) {
    ReflektCategory *c = NULL;
    if (reflekt_category_parse("objects: v y\narrows:\n  a: v -> y\n", 64, &c) != REFLEKT_STATUS_OK)
        return fail("parse");
    size_t y = 0;
    if (reflekt_category_object(c, "y", &y) != REFLEKT_STATUS_OK)
        return fail("object");
    size_t ys[2] = {y, y};
    ReflektCategory *plus = NULL;
    if (reflekt_category_cone(c, ys, 2, REFLEKT_DIRECTION_PLUS, &plus) != REFLEKT_STATUS_OK)
        return fail("cone");
    char *text = NULL;
    if (reflekt_category_text(plus, &text) != REFLEKT_STATUS_OK)
        return fail("text");
    printf("%zu %zu\n", reflekt_category_num_objects(plus), reflekt_category_num_morphisms(plus));
    reflekt_string_free(text);

    ReflektVerdict v = REFLEKT_VERDICT_FAIL;
    if (reflekt_run_suite("clock", 0, 4, &v, NULL) != REFLEKT_STATUS_OK)
        return fail("suite");
    printf("clock %d\n", (int)v);

    ReflektCategory *bad = NULL;
    ReflektStatus s = reflekt_category_parse("objects: a a\n", 64, &bad);
    printf("dup %d %s\n", (int)s, strstr(reflekt_last_error(), "line 1") ? "located" : "unlocated");

    reflekt_category_free(plus);
    reflekt_category_free(c);
    printf("version %s\n", reflekt_version());
    return 0;
}
