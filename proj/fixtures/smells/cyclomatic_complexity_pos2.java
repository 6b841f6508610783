public void routeEvents() {
    if (ready(0)) { mark(0); }
    if (ready(1)) { mark(1); }
    if (ready(2)) { mark(2); }
    if (ready(3)) { mark(3); }
    if (ready(4)) { mark(4); }
    if (ready(5)) { mark(5); }
    if (ready(6)) { mark(6); }
    if (ready(7)) { mark(7); }
    if (ready(8)) { mark(8); }
    if (ready(9)) { mark(9); }
    while (pending()) { drain(); }
}
