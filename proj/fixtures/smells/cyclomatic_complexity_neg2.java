public void routeEvents() {
    if (ready(0)) { mark(0); }
    if (ready(1)) { mark(1); }
    if (ready(2)) { mark(2); }
    if (ready(3)) { mark(3); }
    if (ready(4)) { mark(4); }
}
