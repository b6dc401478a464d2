package main

func f() bool {
	return true
}

// The send and the receive are guarded by the same condition, which the
// model cannot correlate.
func main() {
	x := f()
	ch := make(chan int)
	go func() {
		if x {
			ch <- 1
		}
	}()
	if x {
		<-ch
	}
}
